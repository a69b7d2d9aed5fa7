//! The AS and D inequality families and the catalog of named inequalities.

use num_rational::Rational64;

use crate::error::{BellError, Result};
use crate::inequality::{CorrelationInequality, LocalBound};
use crate::local::local_bound_correlation;

/// Above this many inputs the AS bound is attached from its closed form.
pub const AS_ENUMERATION_LIMIT: usize = 26;

/// Names accepted by [`catalog`], in display order.
pub const CATALOG_NAMES: [&str; 12] = [
    "CHSH", "AS4", "AS6", "AS8", "D4", "D5_1", "D5_2", "D6_1", "D6_2", "D6_3", "D6_4", "S3x4",
];

/// The elegant 3x4 inequality as printed: Bob's four inputs are the rows.
pub const S3X4_BOB_ROWS: [[i64; 3]; 4] = [[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilySpec {
    As { n: usize },
    D { first_row: Vec<i64> },
}

impl FamilySpec {
    pub fn generate(&self) -> Result<CorrelationInequality> {
        match self {
            FamilySpec::As { n } => gen_as(*n),
            FamilySpec::D { first_row } => gen_d(first_row),
        }
    }
}

/// Coefficient matrix of AS_n: the first row is all `+1`; row `k` (1-based,
/// `k >= 2`) has `+1` in its first `n-k+1` columns, then `-min(k-1, n-k+1)`,
/// then zeros.
pub fn as_matrix(n: usize) -> Result<Vec<Vec<i64>>> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(BellError::Invalid(format!(
            "AS_n needs an even n >= 2, got {n}"
        )));
    }
    Ok((1..=n)
        .map(|k| {
            let mut row = vec![0i64; n];
            if k == 1 {
                row.fill(1);
                return row;
            }
            let ones = n - k + 1;
            row[..ones].fill(1);
            row[ones] = -((k - 1).min(n - k + 1) as i64);
            row
        })
        .collect())
}

/// Closed form `n(n+2)/4` of the AS_n local bound; verified by enumeration
/// up to the enumeration limit only.
pub fn as_bound_formula(n: usize) -> i64 {
    (n * (n + 2) / 4) as i64
}

/// AS_n with its local bound. For `n <= 26` the bound is enumerated; beyond
/// that it is the closed form, flagged as conjectured.
pub fn gen_as(n: usize) -> Result<CorrelationInequality> {
    let ineq = CorrelationInequality::from_integers(format!("AS{n}"), &as_matrix(n)?)?;
    let bound = if n <= AS_ENUMERATION_LIMIT {
        LocalBound::exact(local_bound_correlation(&ineq)?)
    } else {
        LocalBound::conjectured(Rational64::from(as_bound_formula(n)))
    };
    Ok(ineq.with_bound(bound))
}

/// One step of the diagonal rule: shift left, re-insert the dropped entry
/// on the right with flipped sign.
pub fn shift_row(row: &[i64]) -> Vec<i64> {
    let mut next = row[1..].to_vec();
    next.push(-row[0]);
    next
}

pub fn d_matrix(first_row: &[i64]) -> Result<Vec<Vec<i64>>> {
    if first_row.is_empty() {
        return Err(BellError::Invalid(
            "D inequality needs a non-empty first row".into(),
        ));
    }
    let mut rows = vec![first_row.to_vec()];
    while rows.len() < first_row.len() {
        let next = shift_row(rows.last().expect("non-empty"));
        rows.push(next);
    }
    Ok(rows)
}

pub fn gen_d(first_row: &[i64]) -> Result<CorrelationInequality> {
    let name = format!(
        "D({})",
        first_row
            .iter()
            .map(i64::to_string)
            .collect::<Vec<_>>()
            .join(" ")
    );
    let ineq = CorrelationInequality::from_integers(name, &d_matrix(first_row)?)?;
    let bound = local_bound_correlation(&ineq)?;
    Ok(ineq.with_bound(LocalBound::exact(bound)))
}

/// The S3x4 correlation inequality with Alice's three inputs as rows.
pub fn s3x4() -> Result<CorrelationInequality> {
    let rows: Vec<Vec<i64>> = S3X4_BOB_ROWS.iter().map(|r| r.to_vec()).collect();
    CorrelationInequality::from_bob_major("S3x4", &rows)
}

struct Entry {
    name: &'static str,
    stated_bound: i64,
    build: fn() -> Result<CorrelationInequality>,
}

fn d_entry(row: &[i64]) -> Result<CorrelationInequality> {
    CorrelationInequality::from_integers("", &d_matrix(row)?)
}

const ENTRIES: [Entry; 12] = [
    Entry {
        name: "CHSH",
        stated_bound: 2,
        build: || CorrelationInequality::from_integers("", &as_matrix(2)?),
    },
    Entry {
        name: "AS4",
        stated_bound: 6,
        build: || CorrelationInequality::from_integers("", &as_matrix(4)?),
    },
    Entry {
        name: "AS6",
        stated_bound: 12,
        build: || CorrelationInequality::from_integers("", &as_matrix(6)?),
    },
    Entry {
        name: "AS8",
        stated_bound: 20,
        build: || CorrelationInequality::from_integers("", &as_matrix(8)?),
    },
    Entry {
        name: "D4",
        stated_bound: 10,
        build: || d_entry(&[2, 1, 1, 2]),
    },
    Entry {
        name: "D5_1",
        stated_bound: 8,
        build: || d_entry(&[1, 1, 0, 1, 1]),
    },
    Entry {
        name: "D5_2",
        stated_bound: 20,
        build: || d_entry(&[3, 2, 1, 1, 3]),
    },
    Entry {
        name: "D6_1",
        stated_bound: 10,
        build: || d_entry(&[1, 0, 1, 0, 1, 1]),
    },
    Entry {
        name: "D6_2",
        stated_bound: 28,
        build: || d_entry(&[3, 1, 1, 1, 2, 4]),
    },
    Entry {
        name: "D6_3",
        stated_bound: 36,
        build: || d_entry(&[4, 2, 2, 1, 2, 5]),
    },
    Entry {
        name: "D6_4",
        stated_bound: 42,
        build: || d_entry(&[4, 2, 2, 1, 3, 6]),
    },
    Entry {
        name: "S3x4",
        stated_bound: 6,
        build: s3x4,
    },
];

/// Look up a named inequality. The published bound is attached after it has
/// been re-derived by enumeration; a mismatch is reported as an error.
pub fn catalog(name: &str) -> Result<CorrelationInequality> {
    let entry = ENTRIES
        .iter()
        .find(|e| e.name.eq_ignore_ascii_case(name))
        .ok_or_else(|| BellError::UnknownName(name.to_string()))?;
    let mut ineq = (entry.build)()?;
    ineq.set_name(entry.name);
    let stated = Rational64::from(entry.stated_bound);
    let enumerated = local_bound_correlation(&ineq)?;
    if enumerated != stated {
        return Err(BellError::Invalid(format!(
            "{}: enumerated bound {enumerated} differs from the published {stated}",
            entry.name
        )));
    }
    Ok(ineq.with_bound(LocalBound::exact(stated)))
}

/// The published bound for a catalog name, without enumeration.
pub fn stated_bound(name: &str) -> Option<i64> {
    ENTRIES
        .iter()
        .find(|e| e.name.eq_ignore_ascii_case(name))
        .map(|e| e.stated_bound)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn as2_is_chsh() {
        assert_eq!(as_matrix(2).unwrap(), vec![vec![1, 1], vec![1, -1]]);
        assert_eq!(
            gen_as(2).unwrap().bound().unwrap().value,
            Rational64::from(2)
        );
    }

    #[test]
    fn as_rejects_odd_and_small() {
        for n in [0, 1, 3, 7] {
            assert!(gen_as(n).is_err(), "n = {n}");
        }
    }

    #[test]
    fn as_above_limit_is_conjectured() {
        let as32 = gen_as(32).unwrap();
        let b = as32.bound().unwrap();
        assert!(b.is_conjectured());
        assert_eq!(b.value, Rational64::from(272));
    }

    #[test]
    fn d4_rows() {
        assert_eq!(
            d_matrix(&[2, 1, 1, 2]).unwrap(),
            vec![
                vec![2, 1, 1, 2],
                vec![1, 1, 2, -2],
                vec![1, 2, -2, -1],
                vec![2, -2, -1, -1]
            ]
        );
    }

    #[test]
    fn d_family_examples() {
        assert_eq!(
            gen_d(&[2, 1, 1, 2]).unwrap().bound().unwrap().value,
            Rational64::from(10)
        );
        assert_eq!(
            gen_d(&[1, 1, 0, 1, 1]).unwrap().bound().unwrap().value,
            Rational64::from(8)
        );
        let one = gen_d(&[1]).unwrap();
        assert_eq!(one.rows(), vec![vec![Rational64::from(1)]]);
        assert_eq!(one.bound().unwrap().value, Rational64::from(1));
        assert!(gen_d(&[]).is_err());
    }

    #[test]
    fn catalog_lookup() {
        let d52 = catalog("D5_2").unwrap();
        assert_eq!(
            d52.rows()[0],
            [3, 2, 1, 1, 3].map(Rational64::from).to_vec()
        );
        assert_eq!(d52.bound().unwrap().value, Rational64::from(20));
        assert_eq!(catalog("d6_4").unwrap().name(), "D6_4");
        assert!(matches!(catalog("AS5"), Err(BellError::UnknownName(_))));
    }

    #[test]
    fn s3x4_orientation() {
        let s = catalog("S3x4").unwrap();
        assert_eq!((s.m_a(), s.m_b()), (3, 4));
        let printed: Vec<Vec<Rational64>> = S3X4_BOB_ROWS
            .iter()
            .map(|r| r.iter().map(|&v| Rational64::from(v)).collect())
            .collect();
        assert_eq!(s.bob_major_rows(), printed);
    }
}
