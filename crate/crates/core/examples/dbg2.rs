use nilsoliton::algebra::validate;
use nilsoliton::catalog;
use nilsoliton::flow::{flow_minimize, perturb, test_retract, FlowParams};

fn main() {
    let entry = catalog::symplectic_abc(1.0, 1.0, 0.0).unwrap();
    let start = perturb(&entry.bracket, &entry.structure, 0.3, 41).unwrap();
    let mut params = FlowParams::default();
    params.max_iter = 300;
    let trace = flow_minimize(&start, &entry.structure, &params).unwrap();
    let mut b = trace.final_bracket.clone();
    for it in 0..4 {
        let rep = validate(&b, 1e-9);
        println!("retract iter {it}: jacobi {:.3e}", rep.jacobi_residual);
        b = test_retract(&b, &entry.structure);
    }
    // also certify the retracted point
    let cert = nilsoliton::minimality::certify(&b, &entry.structure).unwrap();
    println!("residual after cleanup: {:.3e}", cert.residual);
    let ders = nilsoliton::algebra::derivation_space(&trace.final_bracket, 1e-9);
    println!("der dim at raw final: {}", ders.len());
    let ders2 = nilsoliton::algebra::derivation_space(&b, 1e-9);
    println!("der dim after cleanup: {}", ders2.len());
}
