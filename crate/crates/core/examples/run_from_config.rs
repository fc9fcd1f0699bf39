//! Resolve a configuration from TOML plus overrides, then run it into an
//! output directory the way the command-line tool does.

use foldmesh::io::{load_config_str, run_to_dir_until, ConfigOverrides};
use foldmesh::events::EventKind;

const CONFIG: &str = r#"
seed = "4-2-4-2"
steps = 20000
snapshot_every = 5000

[free]
2 = 30
4 = 30

[physics]
container_width = 30
container_height = 30
"#;

fn main() {
    let flags = ConfigOverrides {
        out: Some(std::env::temp_dir().join("foldmesh-squares")),
        params: vec!["rules.fold_limit=3000".into()],
        ..Default::default()
    };
    let cfg = load_config_str(CONFIG, &flags).unwrap();
    print!("{}", cfg.to_toml());

    let report = run_to_dir_until(&cfg, |_, events| events.iter().any(|e| e.kind == EventKind::Split)).unwrap();
    println!("\nstopped after {} steps, output in {}", report.steps, report.out.display());
    println!("{}", report.summary);
}
