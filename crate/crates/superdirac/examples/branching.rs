use std::sync::Arc;

use superdirac::analysis::even_decomposition_verify;
use superdirac::uea::Uea;
use superdirac::weights::RootDatum;

fn main() {
    let uea = Arc::new(Uea::new(&RootDatum::new(2, 1, 1, 1).unwrap()));
    for w in ["-2,0|1", "1,0|0"] {
        let lambda = uea.datum.parse_weight(w).unwrap();
        let (pred, v) = even_decomposition_verify(uea.clone(), &lambda, 3).unwrap();
        println!("{w}: verdict {:?}", v.status);
        println!("{}", serde_json::to_string_pretty(&pred).unwrap());
    }
}
