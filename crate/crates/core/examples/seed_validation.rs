//! What shape will a seed fold into, and can its phenes mesh?

use foldmesh::seedlab::{parse_seed, predict_fold, validate_seed};

fn main() {
    let seeds: Vec<String> = match std::env::args().skip(1).collect::<Vec<_>>() {
        v if v.is_empty() => ["2-2-2", "4-2-4-2", "2-1-2-2-1-2-2-1-2", "2-2-2-2", "3-3-3"].map(String::from).to_vec(),
        v => v,
    };
    for text in seeds {
        let spec = match parse_seed(&text) {
            Ok(s) => s,
            Err(e) => {
                println!("{text}: {e}\n");
                continue;
            }
        };
        print!("{}", validate_seed(&spec));
        if let Ok(plan) = predict_fold(&spec) {
            let corners: Vec<String> = plan.vertices.iter().map(|v| format!("({:.2}, {:.2})", v.x, v.y)).collect();
            println!("vertices  {}", corners.join(" "));
        }
        println!();
    }
}
