use std::path::Path;

use pairvqe::{format_fcidump, parse_fcidump, read_fcidump, write_fcidump, Error};
use pairvqe_core::integrals::Eri;
use pairvqe_core::linalg::Matrix;
use pairvqe_core::IntegralSet;
use proptest::prelude::*;

const WATER_LIKE: &str = "\
 &FCI NORB=2,NELEC=2,MS2=0,
  ORBSYM=1,1,
  ISYM=1,
 &END
  0.6757101548D+00   1   1   1   1
  0.6645817869D+00   2   2   1   1
  0.1809270275D+00   2   1   2   1
  0.6985609774D+00   2   2   2   2
 -0.1252477303D+01   1   1   0   0
 -0.4759344611D+00   2   2   0   0
  0.7137758743D+00   0   0   0   0
";

fn parse(text: &str) -> Result<IntegralSet, Error> {
    parse_fcidump(text, Path::new("test.fcidump"))
}

fn parse_error_line(text: &str) -> usize {
    match parse(text) {
        Err(Error::Parse { line, .. }) => line,
        other => panic!("expected a parse error, got {other:?}"),
    }
}

#[test]
fn parses_header_body_and_fortran_exponents() {
    let s = parse(WATER_LIKE).unwrap();
    assert_eq!((s.norb(), s.nelec(), s.ms2()), (2, 2, 0));
    assert!((s.e_core() - 0.7137758743).abs() < 1e-15);
    assert!((s.h()[(1, 1)] + 0.4759344611).abs() < 1e-15);
    // every permutation of (21|21) resolves to the same slot
    for (p, q, r, t) in [(1, 0, 1, 0), (0, 1, 0, 1), (0, 1, 1, 0), (1, 0, 0, 1)] {
        assert!((s.eri().get(p, q, r, t) - 0.1809270275).abs() < 1e-15);
    }
    assert_eq!(s.symmetry().unwrap().orbsym, vec![1, 1]);
}

#[test]
fn slash_terminator_and_single_line_header() {
    let text = WATER_LIKE.replace(
        "&FCI NORB=2,NELEC=2,MS2=0,\n  ORBSYM=1,1,\n  ISYM=1,\n &END",
        "&FCI NORB=2, NELEC=2, MS2=0 /",
    );
    let s = parse(&text).unwrap();
    assert_eq!(s.norb(), 2);
    assert!(s.symmetry().is_none());
}

#[test]
fn orbital_energy_lines_are_ignored() {
    let text = format!("{WATER_LIKE}  -0.5 1 0 0 0\n");
    assert!(parse(&text).is_ok());
}

#[test]
fn malformed_input_reports_the_offending_line() {
    assert_eq!(
        parse_error_line(&WATER_LIKE.replace("2   2   2   2", "2   2   2")),
        8
    );
    assert_eq!(
        parse_error_line(&WATER_LIKE.replace("0.6985609774D+00", "0.69x")),
        8
    );
    assert_eq!(
        parse_error_line(&WATER_LIKE.replace("2   2   2   2", "3   2   2   2")),
        8
    );
    assert_eq!(
        parse_error_line(&WATER_LIKE.replace("2   2   0   0", "2   0   2   0")),
        10
    );
    assert!(matches!(
        parse(&WATER_LIKE.replace("&END", "")),
        Err(Error::Parse { .. })
    ));
    assert!(matches!(
        parse(&WATER_LIKE.replace("NORB=2,", "")),
        Err(Error::Parse { .. })
    ));
    assert!(matches!(
        parse(&WATER_LIKE.replace("ORBSYM=1,1", "ORBSYM=1")),
        Err(Error::Parse { .. })
    ));
    assert!(matches!(
        parse(&WATER_LIKE.replace("NELEC=2", "NELEC=3")),
        Err(Error::Parse { .. })
    ));
}

#[test]
fn missing_file_is_an_io_error() {
    assert!(matches!(
        read_fcidump("/nonexistent/x.fcidump"),
        Err(Error::Io { .. })
    ));
}

fn integral_set(norb: usize, values: &[f64]) -> IntegralSet {
    let mut it = values.iter().copied().cycle();
    let mut h = Matrix::zeros(norb, norb);
    for p in 0..norb {
        for q in 0..=p {
            let v = it.next().unwrap();
            h[(p, q)] = v;
            h[(q, p)] = v;
        }
    }
    let mut eri = Eri::zeros(norb);
    for p in 0..norb {
        for q in 0..norb {
            for r in 0..norb {
                for s in 0..norb {
                    if (p * norb + q) >= (r * norb + s) && p >= q && r >= s {
                        eri.set(p, q, r, s, it.next().unwrap());
                    }
                }
            }
        }
    }
    IntegralSet::new(2, 0, it.next().unwrap(), h, eri).unwrap()
}

proptest! {
    #[test]
    fn format_then_parse_is_lossless(
        norb in 1usize..=5,
        values in prop::collection::vec(-3.0f64..3.0, 40),
    ) {
        let s = integral_set(norb, &values);
        let back = parse(&format_fcidump(&s)).unwrap();
        prop_assert_eq!(back.max_abs_diff(&s), 0.0);
        prop_assert_eq!(back.e_core(), s.e_core());
    }
}

#[test]
fn fixture_survives_a_write_read_cycle() {
    let fixture =
        Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/h2o/h2o_1.000.fcidump");
    let s = read_fcidump(&fixture).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("copy.fcidump");
    write_fcidump(&s, &out).unwrap();
    let back = read_fcidump(&out).unwrap();
    assert_eq!(back.max_abs_diff(&s), 0.0);
    assert_eq!(back.symmetry(), s.symmetry());
}
