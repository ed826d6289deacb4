use std::sync::Arc;

use superdirac::dirac::{dirac_cohomology, DiracComplex};
use superdirac::modules::simple_truncation;
use superdirac::oscillator::oscillator_character;
use superdirac::uea::Uea;
use superdirac::weights::RootDatum;

fn main() {
    let uea = Arc::new(Uea::new(&RootDatum::new(2, 1, 1, 1).unwrap()));
    let d = uea.datum.clone();
    let m = simple_truncation(uea, &d.zero(), 4).unwrap();
    let cx = DiracComplex::new(&m, 4).unwrap();
    let rep = dirac_cohomology(&cx);
    let osc = oscillator_character(&d, 4);
    println!("H_D(trivial) equals the oscillator character: {}", rep.hd() == osc);
    println!("{}", serde_json::to_string_pretty(&rep.summary_json()).unwrap());
}
