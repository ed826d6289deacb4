use std::sync::Arc;

use superdirac::modules::verma_truncation;
use superdirac::uea::Uea;
use superdirac::weights::RootDatum;

fn main() {
    let uea = Arc::new(Uea::new(&RootDatum::new(2, 1, 1, 1).unwrap()));
    let lambda = uea.datum.parse_weight("1,0|0").unwrap();
    let m = verma_truncation(uea, &lambda, 2).unwrap();
    for block in m.blocks_json() {
        println!("{}", serde_json::to_string(&block).unwrap());
    }
}
