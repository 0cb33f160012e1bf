//! Library side of the `fueter` binary: option types, the property
//! verification suite and the text formats written to stdout.

pub mod options;
pub mod output;
pub mod verify;

pub use options::{parse_box, Options};
pub use output::{error_json, scan_csv, ComponentsJson};
pub use verify::{verify, Detail, PropertyReport};
