use nilsoliton::algebra::validate;
use nilsoliton::catalog;
use nilsoliton::flow::{flow_minimize, perturb, FlowParams};
use nilsoliton::minimality::{certify, normalize_scal, ricci_spectrum};
use nilsoliton::structures::class_condition_residual;

fn main() {
    let entry = catalog::symplectic_abc(1.0, 1.0, 0.0).unwrap();
    let start = perturb(&entry.bracket, &entry.structure, 0.3, 41).unwrap();
    let rep = validate(&start, 1e-9);
    println!("start jacobi {:.3e} ic {:.3e}", rep.jacobi_residual,
        class_condition_residual(&entry.structure, &start));
    let c0 = certify(&start, &entry.structure).unwrap();
    println!("start residual {:.3e}", c0.residual);
    let mut params = FlowParams::default();
    params.max_iter = 300;
    let trace = flow_minimize(&start, &entry.structure, &params).unwrap();
    for it in trace.iterates.iter().take(12) {
        println!("k={} F={:.12} G={:.3e} scal={:.3}", it.step, it.f_value, it.grad_norm, it.scal);
    }
    println!("...");
    for it in trace.iterates.iter().rev().take(6).rev() {
        println!("k={} F={:.12} G={:.3e} scal={:.3}", it.step, it.f_value, it.grad_norm, it.scal);
    }
    let repf = validate(&trace.final_bracket, 1e-9);
    println!("final jacobi {:.3e} converged {} residual {:.3e}",
        repf.jacobi_residual, trace.converged, trace.final_certificate.residual);
    println!("final ic {:.3e}", class_condition_residual(&entry.structure, &trace.final_bracket));
    println!("ref  spectrum {:?}", ricci_spectrum(&normalize_scal(&entry.bracket).unwrap()));
    println!("goal spectrum {:?}", ricci_spectrum(&trace.final_bracket));
}
