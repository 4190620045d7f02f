// Embeds data/MANIFEST and every file it names.

use std::env;
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

fn main() {
    let root = PathBuf::from(env::var("CARGO_MANIFEST_DIR").unwrap()).join("../../data");
    let root = root.canonicalize().expect("data directory");
    let manifest = root.join("MANIFEST");
    println!("cargo:rerun-if-changed={}", root.display());
    println!("cargo:rerun-if-changed={}", manifest.display());

    let text = fs::read_to_string(&manifest).expect("read data/MANIFEST");
    let mut out = String::new();
    writeln!(out, "pub(crate) static MANIFEST: &str = include_str!({:?});", manifest.display().to_string()).unwrap();
    writeln!(out, "pub(crate) static FILES: &[(&str, &str)] = &[").unwrap();
    for line in text.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#')) {
        let file = line.split('\t').nth(2).expect("manifest row has a file column");
        let path = root.join(file);
        assert!(path.is_file(), "manifest names missing file {file}");
        println!("cargo:rerun-if-changed={}", path.display());
        writeln!(out, "    ({file:?}, include_str!({:?})),", path.display().to_string()).unwrap();
    }
    writeln!(out, "];").unwrap();
    fs::write(PathBuf::from(env::var("OUT_DIR").unwrap()).join("catalog_data.rs"), out).unwrap();
}
