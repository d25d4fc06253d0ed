//! Reference formulas.

use super::{Formula, Provenance};
use crate::error::{Error, Result};
use crate::exactnum::BigInt;

fn build(m: u32, p: u32, a: i64, r: &str, s: &[&str], provenance: Provenance) -> Formula {
    let parse = |v: &str| v.parse::<BigInt>().expect("literal integer");
    Formula::new(
        m,
        p,
        a.into(),
        parse(r),
        s.iter().map(|v| parse(v)).collect(),
        provenance,
    )
    .expect("well-formed literal formula")
}

/// `π = sum_n (50n - 6) / (C(3n, n) 2^n)`.
pub fn gosper() -> Formula {
    build(3, 1, 2, "1", &["-6", "50"], Provenance::Imported)
}

const EXAMPLE_1: &[&str] = &["-89286", "3875948", "-34970134", "110202472", "-115193600"];

const EXAMPLE_2: &[&str] = &[
    "-869897157255",
    "-3524219363487888",
    "112466777263118189",
    "-1242789726208374386",
    "6693196178751930680",
    "-19768094496651298112",
    "32808347163463348736",
    "-28892659596072587264",
    "10530503748472012800",
];

const EXAMPLE_3: &[&str] = &[
    "-2062111884756347479085709280875",
    "1505491740302839023753569717261882091900",
    "-112401149404087658213839386716211975291975",
    "3257881651942682891818557726225840674110002",
    "-51677309510890630500607898599463036267961280",
    "517337977987354819322786909541179043148522720",
    "-3526396494329560718758086392841258152390245120",
    "17114576623599516627501216110074805943799363584",
    "-60739416613228219940886539658145904402068029440",
    "159935882563435860391195903248596461569183580160",
    "-313951952615028230229958218839819183812205608960",
    "457341091673257198565533286493831205566468325376",
    "-486846784774707448105420279985074159657397780480",
    "367314505118245777241612044490633887668208926720",
    "-185647326591648164598342857319777582801297080320",
    "56224688035707015687999128994324690418467340288",
    "-7687255778816557786073977795149360408612044800",
];

/// The `n^7` coefficient of the `k = 4` summand as it circulates in print,
/// with one spurious digit.
pub const EXAMPLE_3_MISPRINTED_N7: &str = "171145766235995166227501216110074805943799363584";

const EXAMPLE_4: &[&str] = &[
    "-4843934523072",
    "-1008341177146848",
    "23756198610824352",
    "-242873913552020704",
    "1195813551184400032",
    "-3272960363556054592",
    "4909379167837011328",
    "-3816399750842818816",
    "1190182007407360000",
];

/// Worked examples: 1, 2, 3 are the symmetric cases `k = 1, 2, 4`;
/// 4 is the nonsymmetric `m = 10, p = 4, a = 4` series.
pub fn example(index: u32) -> Result<Formula> {
    Ok(match index {
        1 => build(8, 4, -4, "11025", EXAMPLE_1, Provenance::Proven(1)),
        2 => build(16, 8, 16, "91307341125", EXAMPLE_2, Provenance::Proven(2)),
        3 => build(
            32,
            16,
            256,
            "209930804546575169974541625000",
            EXAMPLE_3,
            Provenance::Proven(4),
        ),
        4 => build(10, 4, 4, "24748759035", EXAMPLE_4, Provenance::Imported),
        _ => return Err(Error::domain(format!("no example {index}; choose 1..4"))),
    })
}
