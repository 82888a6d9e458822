use std::path::PathBuf;

fn main() {
    let crate_dir = PathBuf::from(std::env::var("CARGO_MANIFEST_DIR").expect("set by cargo"));
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");
    let config = cbindgen::Config::from_file(crate_dir.join("cbindgen.toml")).expect("cbindgen.toml parses");
    let header =
        cbindgen::Builder::new().with_crate(&crate_dir).with_config(config).generate().expect("C header generation");
    header.write_to_file(crate_dir.join("include/qlmass.h"));
}
