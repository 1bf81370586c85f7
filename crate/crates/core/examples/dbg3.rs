use nalgebra::DMatrix;
use nilsoliton::algebra::{derivation_space, infinitesimal_act, Bracket};
use nilsoliton::catalog;
use nilsoliton::flow::{flow_minimize, perturb, FlowParams};

fn sv_of_derivation_operator(b: &Bracket) {
    let n = b.dim();
    let pairs = n * (n - 1) / 2;
    let mut m = DMatrix::<f64>::zeros(pairs * n, n * n);
    for p in 0..n {
        for q in 0..n {
            let mut unit = DMatrix::zeros(n, n);
            unit[(p, q)] = 1.0;
            let image = infinitesimal_act(&unit, b).dense();
            let mut row = 0;
            for i in 0..n {
                for j in (i + 1)..n {
                    for k in 0..n {
                        m[(row * n + k, p * n + q)] = image.get(i, j, k);
                    }
                    row += 1;
                }
            }
        }
    }
    let svd = m.svd(false, false);
    let mut sv: Vec<f64> = svd.singular_values.iter().cloned().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    println!("smallest 14 sv: {:?}", &sv[sv.len()-14..]);
}

fn main() {
    let entry = catalog::symplectic_abc(1.0, 1.0, 0.0).unwrap();
    println!("clean point: der dim {}", derivation_space(&entry.bracket, 1e-9).len());
    sv_of_derivation_operator(&entry.bracket);
    let start = perturb(&entry.bracket, &entry.structure, 0.3, 41).unwrap();
    println!("perturbed: der dim {}", derivation_space(&start, 1e-9).len());
    let mut params = FlowParams::default();
    params.max_iter = 300;
    let trace = flow_minimize(&start, &entry.structure, &params).unwrap();
    println!("flow limit:");
    sv_of_derivation_operator(&trace.final_bracket);
}
