//! Library side of the gh-forge CLI: the reproduction report and the
//! glued-nets document used by `topo transfer`.

pub mod glued_doc;
pub mod report;
