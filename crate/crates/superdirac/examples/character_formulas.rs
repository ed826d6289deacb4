use std::sync::Arc;

use superdirac::analysis::{character_formula_check, kostant_cohomology, kostant_module_height, Formula};
use superdirac::dirac::{dirac_cohomology, DiracComplex};
use superdirac::modules::simple_truncation;
use superdirac::uea::Uea;
use superdirac::weights::RootDatum;

fn main() {
    let uea = Arc::new(Uea::new(&RootDatum::new(2, 1, 1, 1).unwrap()));
    let d = uea.datum.clone();
    let lambda = d.parse_weight("-2,0|1").unwrap();
    let (n, cap) = (2, 4);
    let m = simple_truncation(uea, &lambda, kostant_module_height(&d, n, cap)).unwrap();
    let rep = dirac_cohomology(&DiracComplex::new(&m, n).unwrap());
    let k = kostant_cohomology(&m, n, cap).unwrap();
    for v in [
        character_formula_check(&m, n, Formula::Kostant, None, Some(&k)).unwrap(),
        character_formula_check(&m, n, Formula::DiracIndex, Some(&rep), None).unwrap(),
    ] {
        println!("{}", serde_json::to_string(&v).unwrap());
    }
}
