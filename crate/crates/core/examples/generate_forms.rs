//! Writing generated families as form files and plotting data.

use wittsig::cli;

fn main() {
    for args in [
        vec!["wittsig", "gen", "metabolic", "--n", "1", "--seed", "3", "--m", "3"],
        vec!["wittsig", "gen", "canonical", "--r0", "1/2", "--block", "6:1=1", "--block", "4:3=2"],
        vec!["wittsig", "gen", "constant", "--m", "5", "--diag", "z+z^-1", "--diag", "1"],
        vec!["wittsig", "embeddings", "--m", "60"],
    ] {
        let out = cli::run(args.clone());
        println!("$ {}\n{}", args[1..].join(" "), out.stdout);
    }

    let file = cli::run(["wittsig", "gen", "canonical", "--block", "6:1=1", "--block", "4:3=2"]).stdout;
    let path = std::env::temp_dir().join("wittsig-example-canonical.json");
    std::fs::write(&path, file).unwrap();
    let csv = cli::run(["wittsig", "sigfn", path.to_str().unwrap(), "--out", "csv"]);
    print!("{}", csv.stdout);
}
