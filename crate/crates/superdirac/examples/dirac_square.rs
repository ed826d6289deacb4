use std::sync::Arc;

use superdirac::dirac::{dirac_inequality_audit, dirac_square_audit, DiracComplex};
use superdirac::modules::simple_truncation;
use superdirac::uea::Uea;
use superdirac::weights::RootDatum;

fn main() {
    let uea = Arc::new(Uea::new(&RootDatum::new(2, 1, 1, 1).unwrap()));
    let lambda = uea.datum.parse_weight("-2,0|1").unwrap();
    let m = simple_truncation(uea, &lambda, 3).unwrap();
    let cx = DiracComplex::new(&m, 3).unwrap();
    let audit = dirac_square_audit(&cx);
    println!("D^2 acts by the predicted scalars: {}", audit.pass);
    println!("semisimple on every block: {}", audit.semisimple());
    println!("inequality violations: {}", dirac_inequality_audit(&audit).len());
    println!("{}", serde_json::to_string_pretty(&audit.components).unwrap());
}
