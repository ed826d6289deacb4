use std::sync::Arc;

use superdirac::analysis::{kostant_cohomology, kostant_module_height};
use superdirac::modules::simple_truncation;
use superdirac::uea::Uea;
use superdirac::weights::RootDatum;

fn main() {
    let uea = Arc::new(Uea::new(&RootDatum::new(2, 1, 1, 1).unwrap()));
    let d = uea.datum.clone();
    let lambda = d.parse_weight("-2,0|1").unwrap();
    let (n, cap) = (2, 4);
    let m = simple_truncation(uea, &lambda, kostant_module_height(&d, n, cap)).unwrap();
    let k = kostant_cohomology(&m, n, cap).unwrap();
    println!("d^2 = 0: {}", k.d_squared_zero);
    println!("{}", serde_json::to_string_pretty(&k.summary_json()).unwrap());
}
