//! Fixture contents against independently typed reference tables.

use algcurve::cli_io::fixture;
use algcurve::exactnum::parse_number;
use algcurve::polybasis::Monomial;
use algcurve::{Int, Ival, Rat};
use num_traits::{Signed, Zero};

fn q(s: &str) -> Rat {
    parse_number(s).unwrap()
}

const KEPLER: [(&str, &str); 38] = [
    ("3871/10000", "301/1250"),
    ("7233/10000", "769/1250"),
    ("1", "1"),
    ("15237/10000", "2351/1250"),
    ("13011/2500", "5931/500"),
    ("47913/5000", "294571/10000"),
    ("24023/1250", "168041/2000"),
    ("3011/100", "1647693/10000"),
    ("987/25", "12397/50"),
    ("346/125", "23/5"),
    ("693/250", "461/100"),
    ("2671/1000", "109/25"),
    ("1181/500", "363/100"),
    ("787/500", "197/100"),
    ("1213/500", "189/50"),
    ("477/200", "92/25"),
    ("1101/500", "327/100"),
    ("2387/1000", "369/100"),
    ("31421/10000", "557/100"),
    ("2453/1000", "96/25"),
    ("1167/500", "357/100"),
    ("322/125", "413/100"),
    ("43/20", "79/25"),
    ("2643/1000", "43/10"),
    ("2921/1000", "499/100"),
    ("247/100", "97/25"),
    ("287/125", "87/25"),
    ("2441/1000", "381/100"),
    ("332/125", "433/100"),
    ("2777/1000", "463/100"),
    ("1277/500", "102/25"),
    ("299/100", "517/100"),
    ("2641/1000", "429/100"),
    ("3427/250", "1269/25"),
    ("67781/1000", "13951/25"),
    ("2534/5", "11411"),
    ("21609/500", "7103/25"),
    ("9143/200", "30909/100"),
];

#[test]
fn kepler_points() {
    let ds = fixture("kepler38", None).unwrap();
    let pts = ds.exact_points().unwrap();
    assert_eq!(pts.len(), 38);
    for (i, ((x, y), (ex, ey))) in pts.iter().zip(KEPLER).enumerate() {
        assert_eq!((x, y), (&q(ex), &q(ey)), "P{}", i + 1);
    }
    assert_eq!(ds.vars(), ("r", "p"));
    let groups: Vec<Vec<usize>> = vec![
        vec![1, 2, 3, 4],
        vec![5, 6, 7, 8],
        vec![11, 12, 13, 14],
        vec![15, 16, 17, 18],
        vec![19, 20, 21, 22],
        vec![23, 24, 25, 26],
        vec![27, 28, 29, 30],
        vec![31, 32, 33, 10],
        vec![34, 9, 37, 38],
    ];
    let zero_based: Vec<Vec<usize>> = groups
        .iter()
        .map(|g| g.iter().map(|i| i - 1).collect())
        .collect();
    assert_eq!(ds.groups(), zero_based);
}

#[test]
fn kepler_boxes_surround_points() {
    let boxes = fixture("kepler_boxes", None).unwrap().boxes().unwrap();
    assert_eq!(boxes.len(), 38);
    for (b, (x, y)) in boxes.iter().zip(KEPLER) {
        assert_eq!(b.x(), Ival::new(q(x) - q("1/1000"), q(x) + q("1/1000")));
        assert_eq!(b.y(), Ival::new(q(y) - q("1/100"), q(y) + q("1/100")));
    }
}

#[test]
fn planet_boxes() {
    let want = [
        ("0.3868", "0.3874", "0.2405", "0.2411"),
        ("0.7230", "0.7236", "0.6149", "0.6155"),
        ("1", "1", "1", "1"),
        ("1.5234", "1.5240", "1.8805", "1.8811"),
        ("5.2041", "5.2047", "11.8617", "11.8623"),
        ("9.5823", "9.5829", "29.4568", "29.4574"),
    ];
    let boxes = fixture("planets6", None).unwrap().boxes().unwrap();
    assert_eq!(boxes.len(), 6);
    for (b, (x0, x1, y0, y1)) in boxes.iter().zip(want) {
        assert_eq!(b.x(), Ival::new(q(x0), q(x1)));
        assert_eq!(b.y(), Ival::new(q(y0), q(y1)));
    }
}

const ELLIPSE_L: [&str; 16] = [
    "4.00391006468634",
    "4.01568603234052",
    "4.03546516762171",
    "4.06347582517416",
    "4.10003596888417",
    "4.14554927249083",
    "4.20049672260437",
    "4.26542082282451",
    "4.34089883607274",
    "4.42750157636573",
    "4.52573604652852",
    "4.63597477802543",
    "4.75838211258069",
    "4.89285523313257",
    "5.03899987143207",
    "5.19615242270664",
];

const BARYCENTER_L: [&str; 16] = [
    "4.003910064687",
    "4.015686032341",
    "4.035465167622",
    "4.063475825175",
    "4.100035968885",
    "4.145549272491",
    "4.200496722605",
    "4.265420822825",
    "4.340898836073",
    "4.427501576366",
    "4.525736046529",
    "4.635974778026",
    "4.758382112581",
    "4.892855233133",
    "5.038999871433",
    "5.196152422707",
];

#[test]
fn ellipse_segments() {
    let segs = fixture("ellipse16", None).unwrap().segments().unwrap();
    assert_eq!(segs.len(), 16);
    for (i, (s, l)) in segs.iter().zip(ELLIPSE_L).enumerate() {
        assert_eq!(s.x, Rat::new(Int::from(i + 1), Int::from(16)));
        assert_eq!(s.y, q(l));
        assert_eq!(s.delta, q("0.000000000000005"));
    }
}

#[test]
fn barycenters() {
    let ds = fixture("barycenters16", None).unwrap();
    let pts = ds.exact_points().unwrap();
    assert_eq!(pts.len(), 16);
    for (i, ((x, y), l)) in pts.iter().zip(BARYCENTER_L).enumerate() {
        assert_eq!(x, &Rat::new(Int::from(i + 1), Int::from(16)));
        assert_eq!(y, &q(l));
    }
}

#[test]
fn approximate_coefficients() {
    // Printed truncations; the window runs one last-digit unit away from zero.
    let want = [
        ((4, 0), "431.9999989"),
        ((0, 2), "16.00000013"),
        ((0, 4), "-1.000000008"),
        ((2, 2), "-23.99999985"),
        ((2, 4), "1.999999994"),
        ((4, 2), "-23.99999986"),
        ((6, 2), "15.99999998"),
    ];
    let (support, windows) = fixture("approx8", None).unwrap().coefficients().unwrap();
    assert_eq!(support.len(), 8);
    for ((kx, ky), v) in want {
        let i = support.index_of(&Monomial::new(kx, ky)).unwrap();
        let digits = v.split('.').nth(1).unwrap().len() as u32;
        let unit = Rat::new(
            Int::from(1),
            num_traits::pow(Int::from(10), digits as usize),
        );
        let t = q(v);
        let w = if t.is_negative() {
            Ival::new(&t - &unit, t)
        } else {
            Ival::new(t.clone(), &t + &unit)
        };
        assert_eq!(windows[i], w, "{v}");
    }
    let i = support.index_of(&Monomial::new(4, 4)).unwrap();
    assert_eq!(windows[i], Ival::point(q("-1")));
}

/// Exact sign of an integer polynomial (ascending coefficients) at r.
fn sign_at(coeffs: &[i64], r: &Rat) -> i32 {
    let v = coeffs.iter().rev().fold(Rat::zero(), |acc, &c| {
        acc * r + Rat::from_integer(Int::from(c))
    });
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

enum Coord {
    Exact(&'static str),
    /// Approximate value and an integer polynomial vanishing at it.
    Root(f64, &'static [i64]),
}

#[test]
fn example1_radicals() {
    use Coord::*;
    let s2 = 2f64.sqrt();
    let s73 = 73f64.sqrt();
    let s7 = 7f64.sqrt();
    const Q12: &[i64] = &[72, 0, -1536, 0, 4096];
    const Q14: &[i64] = &[72, 0, -576, 0, 256];
    const Q16: &[i64] = &[32, 0, -1296, 0, 1296];
    const Q18: &[i64] = &[8, 0, -162, 0, 81];
    const Q21: &[i64] = &[-18, 0, -384, 0, 256];
    const Y21: &[i64] = &[-1, -16, 8];
    let table = [
        (Exact("0"), Exact("1")),
        (Exact("-2/3"), Exact("1/3")),
        (Exact("2/3"), Exact("1/3")),
        (Root(-s2 / 6.0, &[-1, 0, 18]), Exact("1/3")),
        (Root(-2.0 * 5f64.sqrt() / 3.0, &[-20, 0, 9]), Exact("5/3")),
        (Root(-s2, &[-2, 0, 1]), Exact("2")),
        (Root(-6f64.sqrt() / 2.0, &[-3, 0, 2]), Exact("1")),
        (Root(6f64.sqrt() / 2.0, &[-3, 0, 2]), Exact("1")),
        (Exact("1"), Exact("2")),
        (Root(2.0 * 5f64.sqrt() / 3.0, &[-20, 0, 9]), Exact("5/3")),
        (Root(10f64.sqrt() / 6.0, &[-5, 0, 18]), Exact("5/3")),
        (Root((12.0 - 6.0 * s2).sqrt() / 8.0, Q12), Exact("1/4")),
        (Root((12.0 + 6.0 * s2).sqrt() / 8.0, Q12), Exact("1/4")),
        (Root(-(18.0 - 6.0 * s7).sqrt() / 4.0, Q14), Exact("3/2")),
        (Root((18.0 - 6.0 * s7).sqrt() / 4.0, Q14), Exact("3/2")),
        (Root(-(18.0 - 2.0 * s73).sqrt() / 6.0, Q16), Exact("2/3")),
        (Root((18.0 + 2.0 * s73).sqrt() / 6.0, Q16), Exact("2/3")),
        (Root(-(9.0 - s73).sqrt() / 3.0, Q18), Exact("4/3")),
        (Root((9.0 + s73).sqrt() / 3.0, Q18), Exact("4/3")),
        (Root(-(9.0 + s73).sqrt() / 3.0, Q18), Exact("4/3")),
        (
            Root(-(12.0 + 9.0 * s2).sqrt() / 4.0, Q21),
            Root(1.0 + 3.0 * s2 / 4.0, Y21),
        ),
        (Exact("1/4"), Root(1.0 + 3.0 * s2 / 4.0, Y21)),
    ];
    let pts = fixture("example1_22", None).unwrap().ival_points().unwrap();
    assert_eq!(pts.len(), 22);
    let tiny = q("1e-30");
    for (i, ((x, y), (ex, ey))) in pts.iter().zip(table).enumerate() {
        for (got, want) in [(x, ex), (y, ey)] {
            match want {
                Exact(v) => assert_eq!(got, &Ival::point(q(v)), "P{}", i + 1),
                Root(approx, poly) => {
                    assert!(got.width() <= tiny, "P{} width", i + 1);
                    // A sign change brackets a root; the float pins which one.
                    assert!(
                        sign_at(poly, got.lo()) * sign_at(poly, got.hi()) < 0,
                        "P{} bracket",
                        i + 1
                    );
                    assert!(
                        (algcurve::exactnum::to_f64(&got.mid()) - approx).abs() < 1e-12,
                        "P{} value",
                        i + 1
                    );
                }
            }
        }
    }
}

#[test]
fn derived_fixtures_lie_on_their_curves() {
    for (x, y) in fixture("circle6", None).unwrap().exact_points().unwrap() {
        assert_eq!(&x * &x + &y * &y, q("1"));
    }
    let ys = ["1", "2", "1/3", "5/3"];
    for (i, (x, y)) in fixture("lines10", None)
        .unwrap()
        .exact_points()
        .unwrap()
        .into_iter()
        .enumerate()
    {
        assert_eq!(x, Rat::new(Int::from(2 * i + 1), Int::from(7)));
        assert_eq!(y, q(ys[i % 4]));
    }
}
