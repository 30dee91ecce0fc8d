// Tensor files, reports, and the command line driven in-process.

use curvlab::cli;
use curvlab::io::{load_tensor, save_tensor, tensor_to_json};
use curvlab::tensor::build_r1;

pub fn run_example() -> curvlab::Result<()> {
    let dir = std::env::temp_dir().join(format!("curvlab-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("r1.json");
    save_tensor(&build_r1(2), &path)?;
    println!("{}", tensor_to_json(&load_tensor(&path)?));

    let case3 = dir.join("case3.json");
    let case3 = case3.to_str().unwrap();
    let mut out = Vec::new();
    let mut call = |args: &[&str]| {
        out.clear();
        let code = cli::run(std::iter::once("curvlab").chain(args.iter().copied()), &mut out);
        print!("$ curvlab {}\n{}", args.join(" "), String::from_utf8_lossy(&out));
        println!("exit {code}\n");
    };
    call(&["generate", "--dim", "6", "--kappa", "1", "--tau", "1", "--A", "J", "--out", case3]);
    call(&["classify", case3, "--format", "json"]);
    call(&["decompose", case3]);
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

fn main() -> curvlab::Result<()> {
    run_example()
}
