//! Reading, generating and writing instance files.

use tspba::{generate, Generator, InstanceFile};

fn main() -> tspba::Result<()> {
    let text = "\
# a hand-written instance
TSPBA 1
n 5
k 1
 4  -1   2   0   # row 1: w12 w13 w14 w15
 3   3   1
-2   5
 7
";
    let file = InstanceFile::parse(text)?;
    println!("parsed n = {}, k = {:?}", file.weighting.n(), file.k);
    print!("{}", file.render());

    let sparse = InstanceFile {
        weighting: generate(
            6,
            Generator::SparseSupport {
                count: 3,
                min: -4,
                max: 4,
            },
            11,
        )?,
        k: None,
    };
    print!("{}", sparse.render());

    match InstanceFile::parse("TSPBA 1\nn 4\n1 2 3 4\n") {
        Ok(_) => println!("unexpectedly parsed"),
        Err(e) => println!("rejected: {e}"),
    }
    Ok(())
}
