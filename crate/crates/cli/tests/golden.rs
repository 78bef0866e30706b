//! Canonical JSON reports for every catalog entry, compared byte for byte
//! with `tests/golden`. Set `BAS_UPDATE_GOLDEN=1` to regenerate.

use std::collections::BTreeMap;
use std::path::PathBuf;

use bas_cli::commands::{check, export_document};
use bas_core::constructions::catalog;

#[test]
fn reports_match_golden_files() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden");
    let update = std::env::var_os("BAS_UPDATE_GOLDEN").is_some();
    for name in catalog::list() {
        let input = export_document(name, &BTreeMap::new()).unwrap().to_json();
        let report = check(input.as_bytes(), &[], true, false).1.expect("json report");
        let path = dir.join(format!("{name}.json"));
        if update {
            std::fs::write(&path, &report).unwrap();
        }
        assert_eq!(std::fs::read_to_string(&path).unwrap(), report, "{name}");
    }
}
