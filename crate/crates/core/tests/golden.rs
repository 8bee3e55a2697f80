use std::path::Path;

#[test]
fn golden_files_match_committed_outputs() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("golden");
    for (name, content) in cubiclass::cli::golden_files().unwrap() {
        let existing = std::fs::read_to_string(dir.join(&name)).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(existing == content, "{name} differs from a fresh run; regenerate with `cubiclass golden --regen-golden`");
    }
}
