//! How often a feature, or a pair of features, is offered under masking.

use maskboost::boost::sample_columns;
use maskboost::introspect::{node_pair_availability, path_availability};
use maskboost::rng::stream_from_seed;

fn main() {
    println!("P(feature offered at least once along a path of L levels)");
    println!("{:>5} {:>8} {:>8} {:>8}", "s", "L=1", "L=3", "L=6");
    for s in [0.4, 0.6, 0.8, 0.9, 1.0] {
        let row: Vec<String> = [1, 3, 6]
            .iter()
            .map(|&l| format!("{:8.4}", path_availability(s, l)))
            .collect();
        println!("{s:>5} {}", row.join(" "));
    }

    let p = 122;
    let cols: Vec<usize> = (0..p).collect();
    let mut rng = stream_from_seed(3);
    let trials = 200_000;
    println!("\nP(both primitives offered at one node), {p} columns");
    for s in [0.4, 0.6, 0.8, 0.9] {
        let hits = (0..trials)
            .filter(|_| {
                let picked = sample_columns(&cols, s, &mut rng);
                picked.contains(&0) && picked.contains(&1)
            })
            .count();
        println!(
            "s={s}: exact {:.4}, simulated {:.4}, s^2 {:.4}",
            node_pair_availability(s, p),
            hits as f64 / trials as f64,
            s * s
        );
    }
}
