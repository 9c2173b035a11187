//! Frozen reports for the verbatim tables. Regenerate with `SUPERBRST_BLESS=1`
//! after checking the new output by hand.

use std::path::PathBuf;
use std::sync::Arc;

use superbrst::algebra::Alphabet;
use superbrst::derivation::{verify_suite, Convention, Gauge, SuiteOptions};
use superbrst::dsl::parse_element;
use superbrst::gauge::{verify_gauge_fixing, GaugeConfig};
use superbrst::report::{emit_report, Format, Status, VerificationReport};

fn golden(name: &str, actual: &str) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("SUPERBRST_BLESS").is_some() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "golden {name} differs");
}

fn text(r: &VerificationReport) -> String {
    String::from_utf8(emit_report(r, Format::Text)).unwrap()
}

/// One `STATUS relation` line per relation.
fn table(r: &VerificationReport) -> String {
    r.relations
        .iter()
        .map(|rel| format!("{} {}\n", rel.status.as_str(), rel.name))
        .collect()
}

#[test]
fn verbatim_nilpotency_residuals() {
    let opts = SuiteOptions::with_convention(Convention::Verbatim);
    for suite in ["landau", "linear", "curci-ferrari", "massive-cf"] {
        let r = verify_suite(suite, &opts).unwrap();
        golden(&format!("brst-verbatim-{suite}.txt"), &text(&r));
    }
}

#[test]
fn verbatim_ss_on_v_matches_hand_expansion() {
    // s V = -Dpp(c) - [V,c], s c = -[c,c] as printed; expanding s(s V) by hand
    // gives 2*3*(V c c - c c V + c Dpp(c) + Dpp(c) c) for the self-bracket.
    let opts = SuiteOptions::with_convention(Convention::Verbatim);
    let (set, _, _) = opts.rule_set(Gauge::Linear).unwrap();
    let got = set.commutator_on("s", "s", "V_L").unwrap();
    let a: Arc<Alphabet> = set.alphabet().clone();
    let want = parse_element("6*(V_L*c_L*c_L - c_L*c_L*V_L + c_L*Dpp(c_L) + Dpp(c_L)*c_L)", &a, 2).unwrap();
    assert_eq!(got, want);
}

#[test]
fn nakanishi_ojima_tables() {
    let opts = SuiteOptions::with_convention(Convention::Verbatim);
    let r = verify_suite("no-algebra", &opts).unwrap();
    golden("no-algebra-verbatim-cf.table", &table(&r));
    golden("no-algebra-verbatim-cf.txt", &text(&r));
    let r = verify_suite("no-algebra-massive", &opts).unwrap();
    golden("no-algebra-massive-verbatim.table", &table(&r));

    let leibniz = SuiteOptions::with_convention(Convention::Leibniz);
    let r = verify_suite("no-algebra", &leibniz).unwrap();
    assert_eq!(r.status(), Status::Pass, "{}", text(&r));
    let r = verify_suite("no-algebra-massive", &leibniz).unwrap();
    golden("no-algebra-massive-leibniz.table", &table(&r));
    golden("no-algebra-massive-leibniz.txt", &text(&r));
}

#[test]
fn verbatim_gauge_fixing_failures() {
    let opts = SuiteOptions::default();
    for g in [Gauge::Landau, Gauge::Linear, Gauge::CurciFerrari, Gauge::MassiveCf] {
        let cfg = GaugeConfig::symbolic(g, Convention::Verbatim);
        let r = verify_gauge_fixing(&cfg, &opts).unwrap();
        golden(&format!("gauge-fixing-verbatim-{}.txt", g.as_str()), &text(&r));
    }
}
