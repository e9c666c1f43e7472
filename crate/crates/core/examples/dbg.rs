use dpe_multipath::{caf::*, mc::*, reference, Execution};
fn main() {
    for c in [reference::CASE1, reference::CASE2, reference::CASE3] {
        let s = reference::case_scenario(&c).unwrap();
        let r = run_case_study(
            &s,
            "x",
            &[
                GridSpec::default_for(Space::Position),
                GridSpec::default_for(Space::Velocity),
            ],
            Execution::Parallel,
        )
        .unwrap();
        for sp in &r.spaces {
            println!(
                "case {:?} {} bound {:?} est {:?}",
                c.id,
                sp.space,
                sp.bound.map(|b| b.to_string()),
                (sp.estimate.east, sp.estimate.north)
            );
            for row in &sp.rows {
                println!(
                    "  {}-{} dθ={:.1} th={:.2} sim={:?} pass={:?}",
                    row.first,
                    row.second,
                    row.delta_theta.to_degrees(),
                    row.theoretical,
                    row.simulated,
                    row.pass
                );
            }
        }
    }
}
