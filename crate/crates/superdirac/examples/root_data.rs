use superdirac::weights::RootDatum;

fn main() {
    let d = RootDatum::new(2, 1, 1, 1).expect("valid datum");
    println!("{}", serde_json::to_string_pretty(&serde_json::json!({
        "even_positive": d.even_pos,
        "odd_positive": d.odd_pos,
        "compact_positive": d.compact_pos,
        "noncompact_positive": d.noncompact_pos,
        "rho": d.rho,
        "rho1": d.rho1,
    })).unwrap());
    for (name, roots) in d.documented_odd_systems() {
        let shown: Vec<String> = roots.iter().map(|r| r.to_string()).collect();
        println!("{name}: {}", shown.join(", "));
    }
}
