//! Shared fixtures for the criterion benches.

use tabling_core::{Design, TableSpace, Workload};

/// Stores every call and answer of `workload` in a fresh table space.
pub fn store(design: Design, workload: &Workload) -> TableSpace {
    let mut space = TableSpace::new(design);
    for query in &workload.queries {
        let te = space.table_entry(query.call.name, query.call.arity(), design).expect("one design per space");
        let (frame, _) = space.subgoal_check_insert(te, &query.call).expect("well-formed call");
        for answer in query.answers() {
            space.answer_check_insert(frame, &answer).expect("well-formed answer");
        }
    }
    space
}
