//! File formats and reporting: problem documents, mapping files, random
//! instance generation, and solver run reports.

pub mod gen;
pub mod report;
pub mod schema;

pub use gen::{gen_instance, parse_genspec, parse_genspec_file, GenSpec, Span};
pub use report::write_report;
pub use schema::{
    doc_of, parse_mapping, parse_mapping_file, parse_problem, parse_problem_file,
    problem_of, serialize_problem, ProblemDoc,
};
