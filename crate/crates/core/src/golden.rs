//! Golden regression data for the coefficient tables.
//!
//! One JSON file per type ships in `data/golden/` and is embedded into the
//! library, so a release binary can verify itself without the source tree.
//! The files hold the exact g values in the canonical cyclotomic
//! serialization, which keeps regressions diffable. An alternative
//! directory can be supplied to compare against on-disk copies instead.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::coeffs::CoeffTable;
use crate::cyclo::CycloNum;
use crate::error::{CoreError, Result};
use crate::roots::AdeType;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoldenTable {
    #[serde(rename = "type")]
    pub ade: AdeType,
    pub h: u32,
    pub g: Vec<CycloNum>,
}

impl GoldenTable {
    pub fn from_table(ct: &CoeffTable) -> GoldenTable {
        GoldenTable {
            ade: ct.ade(),
            h: ct.h(),
            g: ct.g_values().to_vec(),
        }
    }

    /// Canonical file rendering (pretty JSON, trailing newline).
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("golden table serializes");
        s.push('\n');
        s
    }
}

fn parse(src: &str, what: &str) -> Result<GoldenTable> {
    serde_json::from_str(src)
        .map_err(|e| CoreError::BadInput(format!("golden data {what}: {e}")))
}

/// The compiled-in golden table for a verification-set type.
pub fn embedded(t: AdeType) -> Result<GoldenTable> {
    let src: &str = match t {
        AdeType::A(1) => include_str!("../data/golden/A1.json"),
        AdeType::A(2) => include_str!("../data/golden/A2.json"),
        AdeType::A(3) => include_str!("../data/golden/A3.json"),
        AdeType::A(4) => include_str!("../data/golden/A4.json"),
        AdeType::A(5) => include_str!("../data/golden/A5.json"),
        AdeType::A(6) => include_str!("../data/golden/A6.json"),
        AdeType::A(7) => include_str!("../data/golden/A7.json"),
        AdeType::A(8) => include_str!("../data/golden/A8.json"),
        AdeType::D(4) => include_str!("../data/golden/D4.json"),
        AdeType::D(5) => include_str!("../data/golden/D5.json"),
        AdeType::D(6) => include_str!("../data/golden/D6.json"),
        AdeType::D(7) => include_str!("../data/golden/D7.json"),
        AdeType::D(8) => include_str!("../data/golden/D8.json"),
        AdeType::E(6) => include_str!("../data/golden/E6.json"),
        AdeType::E(7) => include_str!("../data/golden/E7.json"),
        AdeType::E(8) => include_str!("../data/golden/E8.json"),
        other => {
            return Err(CoreError::BadInput(format!(
                "no golden data for {other}"
            )))
        }
    };
    parse(src, &t.to_string())
}

/// Loads `<dir>/<type>.json`.
pub fn load_dir(dir: &Path, t: AdeType) -> Result<GoldenTable> {
    let path = dir.join(format!("{t}.json"));
    let src = fs::read_to_string(&path)
        .map_err(|e| CoreError::BadInput(format!("{}: {e}", path.display())))?;
    parse(&src, &t.to_string())
}

/// Exact comparison of a computed table against golden data; the error
/// message names the first mismatch.
pub fn compare(ct: &CoeffTable, golden: &GoldenTable) -> std::result::Result<(), String> {
    if golden.ade != ct.ade() {
        return Err(format!(
            "golden data is for {}, table is {}",
            golden.ade,
            ct.ade()
        ));
    }
    if golden.h != ct.h() {
        return Err(format!(
            "golden h = {}, table h = {}",
            golden.h,
            ct.h()
        ));
    }
    if golden.g.len() != ct.len() {
        return Err(format!(
            "golden table has {} entries, computed table has {}",
            golden.g.len(),
            ct.len()
        ));
    }
    for (i, (a, b)) in ct.g_values().iter().zip(&golden.g).enumerate() {
        if a != b {
            return Err(format!(
                "g_{} mismatch: computed {}, golden {}",
                i + 1,
                a,
                b
            ));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::closed_form_reference;

    /// Regenerates the golden files from the closed forms. Run explicitly:
    /// `cargo test -p adeh-core write_golden_files -- --ignored`
    #[test]
    #[ignore]
    fn write_golden_files() {
        let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/golden");
        for t in AdeType::verification_set() {
            let ct = closed_form_reference(t).unwrap();
            let g = GoldenTable::from_table(&ct);
            fs::write(dir.join(format!("{t}.json")), g.render()).unwrap();
        }
    }

    #[test]
    fn embedded_matches_closed_forms() {
        for t in AdeType::verification_set() {
            let ct = closed_form_reference(t).unwrap();
            let g = embedded(t).unwrap();
            assert!(compare(&ct, &g).is_ok(), "{t}");
            // and the rendering round-trips
            let back: GoldenTable = serde_json::from_str(&g.render()).unwrap();
            assert_eq!(back, g);
        }
    }

    #[test]
    fn compare_reports_mismatch() {
        let ct = closed_form_reference(AdeType::A(3)).unwrap();
        let mut g = GoldenTable::from_table(&ct);
        g.g[1] = CycloNum::from_int(4, 7);
        let err = compare(&ct, &g).unwrap_err();
        assert!(err.contains("g_2"), "{err}");
    }
}
