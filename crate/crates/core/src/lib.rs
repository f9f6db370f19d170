pub mod cli;
pub mod coordinate;
pub mod cuts;
pub mod error;
pub mod index;
pub mod oracle;
pub mod quasicut;
pub mod serial;
pub mod small_ext;
pub mod vector;
