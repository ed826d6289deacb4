use std::sync::Arc;

use superdirac::modules::certify_unitarity;
use superdirac::uea::Uea;
use superdirac::weights::RootDatum;

fn main() {
    let uea = Arc::new(Uea::new(&RootDatum::new(2, 1, 1, 1).unwrap()));
    for w in ["0,0|0", "-2,0|1", "-2,0|0", "1,0|0", "0,0|-1"] {
        let lambda = uea.datum.parse_weight(w).unwrap();
        let cert = certify_unitarity(uea.clone(), &lambda, 3).unwrap();
        println!("{w:>8}  certified={}  {}", cert.certified(), serde_json::to_string(&cert).unwrap());
    }
}
