//! Reference table of half-integral weight eta quotients reported as Hecke
//! eigenforms, as printed (50 rows), with annotations for the rows whose
//! printed data do not hold up.

use std::sync::OnceLock;

use crate::eta::{parse, EtaQuotient};

/// What is wrong with a printed row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RowAnomaly {
    /// The printed quotient fails `∑ m·r_m ≡ 0 (mod 24)`.
    NotModular { weighted_sum: u64 },
    /// The printed quotient is modular, but its weight, level or character
    /// (given here as computed) differ from the printed columns.
    InvariantMismatch {
        weight_num: u32,
        level: u64,
        character: i64,
    },
    /// Repeats an earlier row verbatim.
    Duplicate { of: u32 },
}

impl RowAnomaly {
    pub fn describe(&self) -> String {
        match *self {
            RowAnomaly::NotModular { weighted_sum } => format!(
                "inconsistent as printed: ∑ m·r_m = {weighted_sum} ≢ 0 (mod 24)"
            ),
            RowAnomaly::InvariantMismatch {
                weight_num,
                level,
                character,
            } => format!(
                "inconsistent as printed: quotient has weight {weight_num}/2, level {level}, character {character}"
            ),
            RowAnomaly::Duplicate { of } => format!("duplicate of row {of}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReferenceRow {
    pub row: u32,
    pub level: u64,
    pub weight_num: u32,
    pub character: i64,
    pub printed: &'static str,
    /// Replacement quotient for rows whose printed form is inconsistent.
    pub corrected: Option<&'static str>,
    /// Known anomaly of the printed row.
    pub annotation: Option<RowAnomaly>,
}

impl ReferenceRow {
    pub fn printed_quotient(&self) -> EtaQuotient {
        parse(self.printed).expect("embedded table text parses")
    }

    /// The quotient this row stands for, after correction.
    pub fn quotient(&self) -> EtaQuotient {
        parse(self.corrected.unwrap_or(self.printed)).expect("embedded table text parses")
    }

    pub fn is_canonical(&self) -> bool {
        !matches!(self.annotation, Some(RowAnomaly::Duplicate { .. }))
    }

    pub fn weight_label(&self) -> String {
        format!("{}/2", self.weight_num)
    }
}

const fn row(
    row: u32,
    level: u64,
    weight_num: u32,
    character: i64,
    printed: &'static str,
) -> ReferenceRow {
    ReferenceRow {
        row,
        level,
        weight_num,
        character,
        printed,
        corrected: None,
        annotation: None,
    }
}

const fn corrected(mut r: ReferenceRow, to: &'static str, why: RowAnomaly) -> ReferenceRow {
    r.corrected = Some(to);
    r.annotation = Some(why);
    r
}

const fn duplicate(mut r: ReferenceRow, of: u32) -> ReferenceRow {
    r.annotation = Some(RowAnomaly::Duplicate { of });
    r
}

static ROWS: [ReferenceRow; 50] = [
    row(1, 576, 1, 12, "eta(24z)"),
    row(2, 1152, 1, 24, "eta(48z)"),
    row(3, 176, 3, 44, "eta^2(z)eta(22z)"),
    row(4, 160, 3, 40, "eta^2(2z)eta(20z)"),
    row(5, 864, 3, 8, "eta(2z)eta(4z)eta(18z)"),
    row(6, 448, 3, 28, "eta(2z)eta(8z)eta(14z)"),
    row(7, 176, 3, 1, "eta(2z)eta^2(11z)"),
    row(8, 432, 3, 1, "eta^2(3z)eta(18z)"),
    row(9, 864, 3, 8, "eta(3z)eta(9z)eta(12z)"),
    row(10, 128, 3, 8, "eta^2(4z)eta(16z)"),
    row(11, 128, 3, 8, "eta^3(16z)"),
    row(12, 576, 3, 12, "eta(4z)eta(8z)eta(12z)"),
    row(13, 160, 3, 8, "eta(4z)eta^2(10z)"),
    row(14, 288, 3, 24, "eta^2(6z)eta(12z)"),
    row(15, 432, 3, 12, "eta(6z)eta^2(9z)"),
    row(16, 64, 3, 1, "eta^3(8z)"),
    row(17, 720, 5, 5, "eta^3(z)eta(6z)eta(15z)"),
    row(18, 28, 5, 28, "eta^2(z)eta^2(4z)eta(14z)"),
    row(19, 128, 5, 8, "eta^4(2z)eta(16z)"),
    row(20, 224, 5, 56, "eta^3(2z)eta(4z)eta(14z)"),
    row(21, 96, 5, 8, "eta^3(2z)eta(6z)eta(12z)"),
    row(22, 288, 5, 24, "eta^2(2z)eta^2(4z)eta(12z)"),
    row(23, 16, 5, 8, "eta^2(2z)eta(4z)eta^2(8z)"),
    row(24, 96, 5, 24, "eta(2z)eta(4z)eta^3(6z)"),
    row(25, 288, 5, 24, "eta^4(3z)eta(12z)"),
    row(26, 432, 5, 1, "eta^3(3z)eta(6z)eta(9z)"),
    row(27, 144, 5, 12, "eta^2(3z)eta^3(6z)"),
    row(28, 64, 5, 1, "eta^4(4z)eta(8z)"),
    row(29, 288, 5, 8, "eta^3(4z)eta^2(6z)"),
    row(30, 144, 7, 1, "eta^3(z)eta(3z)eta^3(6z)"),
    row(31, 48, 7, 12, "eta^2(z)eta^2(2z)eta^3(6z)"),
    row(32, 64, 7, 1, "eta^4(2z)eta^2(4z)eta(8z)"),
    row(33, 48, 7, 1, "eta^3(2z)eta^2(3z)eta^2(6z)"),
    corrected(
        row(34, 32, 7, 8, "eta^2(z)eta^5(4z)"),
        "eta^2(2z)eta^5(4z)",
        RowAnomaly::NotModular { weighted_sum: 22 },
    ),
    corrected(
        row(35, 144, 7, 12, "eta^3(4z)eta^2(6z)"),
        "eta^6(3z)eta(6z)",
        RowAnomaly::InvariantMismatch {
            weight_num: 5,
            level: 288,
            character: 8,
        },
    ),
    row(36, 48, 9, 12, "eta^6(z)eta^3(6z)"),
    row(37, 32, 9, 8, "eta^4(z)eta^5(4z)"),
    row(38, 80, 9, 5, "eta^3(z)eta^3(2z)eta^3(5z)"),
    row(39, 16, 9, 1, "eta^2(z)eta^3(2z)eta^4(4z)"),
    corrected(
        row(40, 64, 9, 1, "eta^8(z)eta(8z)"),
        "eta^8(2z)eta(8z)",
        RowAnomaly::NotModular { weighted_sum: 16 },
    ),
    row(41, 32, 9, 8, "eta^6(2z)eta^3(4z)"),
    row(42, 48, 9, 1, "eta^3(2z)eta^6(3z)"),
    row(43, 4, 11, 1, "eta^2(z)eta^7(2z)eta^2(4z)"),
    row(44, 32, 11, 8, "eta^{10}(2z)eta(4z)"),
    row(45, 48, 13, 12, "eta^5(z)eta^5(2z)eta^3(3z)"),
    row(46, 16, 13, 1, "eta^2(z)eta^11(2z)"),
    row(47, 16, 15, 1, "eta^6(z)eta^9(2z)"),
    duplicate(row(48, 48, 13, 12, "eta^5(z)eta^5(2z)eta^3(3z)"), 45),
    duplicate(row(49, 16, 13, 1, "eta^2(z)eta^11(2z)"), 46),
    duplicate(row(50, 16, 15, 1, "eta^6(z)eta^9(2z)"), 47),
];

/// The embedded table.
#[derive(Debug)]
pub struct ReferenceTable {
    rows: &'static [ReferenceRow],
    canonical: Vec<(EtaQuotient, u32)>,
}

impl ReferenceTable {
    pub fn get() -> &'static ReferenceTable {
        static TABLE: OnceLock<ReferenceTable> = OnceLock::new();
        TABLE.get_or_init(|| ReferenceTable {
            rows: &ROWS,
            canonical: ROWS
                .iter()
                .filter(|r| r.is_canonical())
                .map(|r| (r.quotient(), r.row))
                .collect(),
        })
    }

    pub fn rows(&self) -> &'static [ReferenceRow] {
        self.rows
    }

    pub fn row(&self, number: u32) -> Option<&'static ReferenceRow> {
        self.rows.iter().find(|r| r.row == number)
    }

    /// The rows that are not duplicates, with corrections applied.
    pub fn canonical(&self) -> impl Iterator<Item = &'static ReferenceRow> {
        self.rows.iter().filter(|r| r.is_canonical())
    }

    /// Canonical row whose (corrected) quotient equals `q`.
    pub fn find(&self, q: &EtaQuotient) -> Option<u32> {
        self.canonical
            .iter()
            .find(|(quotient, _)| quotient == q)
            .map(|&(_, row)| row)
    }

    /// Recomputes every anomaly from the printed columns alone, ignoring the
    /// annotations.
    pub fn detect_anomalies(&self) -> Vec<(u32, RowAnomaly)> {
        let mut found = Vec::new();
        for (i, r) in self.rows.iter().enumerate() {
            let printed = r.printed_quotient();
            let earlier = self.rows[..i].iter().find(|e| {
                (e.level, e.weight_num, e.character) == (r.level, r.weight_num, r.character)
                    && e.printed_quotient() == printed
            });
            if let Some(e) = earlier {
                found.push((r.row, RowAnomaly::Duplicate { of: e.row }));
                continue;
            }
            match printed.invariants() {
                Err(_) => found.push((
                    r.row,
                    RowAnomaly::NotModular {
                        weighted_sum: printed.weighted_sum(),
                    },
                )),
                Ok(inv) => {
                    if (inv.weight_num, inv.level, inv.character)
                        != (r.weight_num, r.level, r.character)
                    {
                        found.push((
                            r.row,
                            RowAnomaly::InvariantMismatch {
                                weight_num: inv.weight_num,
                                level: inv.level,
                                character: inv.character,
                            },
                        ));
                    }
                }
            }
        }
        found
    }

    /// Anomalies as recorded in the annotations.
    pub fn annotated_anomalies(&self) -> Vec<(u32, RowAnomaly)> {
        self.rows
            .iter()
            .filter_map(|r| r.annotation.map(|a| (r.row, a)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape() {
        let t = ReferenceTable::get();
        assert_eq!(t.rows().len(), 50);
        assert_eq!(t.canonical().count(), 47);
        for (i, r) in t.rows().iter().enumerate() {
            assert_eq!(r.row as usize, i + 1);
        }
    }

    #[test]
    fn canonical_quotients_are_distinct() {
        let t = ReferenceTable::get();
        let mut qs: Vec<EtaQuotient> = t.canonical().map(|r| r.quotient()).collect();
        qs.sort();
        qs.dedup();
        assert_eq!(qs.len(), 47);
    }

    #[test]
    fn detection_matches_annotations() {
        let t = ReferenceTable::get();
        assert_eq!(t.detect_anomalies(), t.annotated_anomalies());
    }

    #[test]
    fn find_rows() {
        let t = ReferenceTable::get();
        assert_eq!(t.find(&parse("8:3").unwrap()), Some(16));
        assert_eq!(t.find(&parse("2:2,4:5").unwrap()), Some(34));
        assert_eq!(t.find(&parse("1:2,4:5").unwrap()), None);
        assert_eq!(t.find(&parse("1:2,2:11").unwrap()), Some(46));
    }
}
