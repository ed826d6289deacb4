use std::sync::Arc;

use superdirac::analysis::index_check;
use superdirac::dirac::{dirac_cohomology, dirac_index, DiracComplex};
use superdirac::modules::simple_truncation;
use superdirac::uea::Uea;
use superdirac::weights::RootDatum;

fn main() {
    let uea = Arc::new(Uea::new(&RootDatum::new(2, 1, 1, 1).unwrap()));
    for w in ["-2,0|1", "-2,0|0"] {
        let lambda = uea.datum.parse_weight(w).unwrap();
        let m = simple_truncation(uea.clone(), &lambda, 3).unwrap();
        let cx = DiracComplex::new(&m, 3).unwrap();
        let idx = dirac_index(&cx);
        let v = index_check(&dirac_cohomology(&cx), &idx);
        println!("{w}: index = Euler characteristic: {}", v.pass());
        println!("{}", serde_json::to_string(&idx.to_json()).unwrap());
    }
}
