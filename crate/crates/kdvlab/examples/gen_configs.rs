//! Regenerates the shipped scenario files under `configs/`.

fn main() {
    let root = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .ancestors()
        .nth(2)
        .unwrap()
        .join("configs");
    std::fs::create_dir_all(&root).unwrap();
    for (name, cfg) in kdvlab::scenarios::all() {
        let text = serde_json::to_string_pretty(&cfg).unwrap();
        std::fs::write(root.join(format!("{name}.json")), text + "\n").unwrap();
        println!("wrote configs/{name}.json");
    }
    // the reference config: every default spelled out, for documentation
    let mut reference = kdvlab::scenarios::thm_decay();
    reference.label = "reference".into();
    let text = serde_json::to_string_pretty(&reference).unwrap();
    std::fs::write(root.join("reference.json"), text + "\n").unwrap();
    println!("wrote configs/reference.json");
}
