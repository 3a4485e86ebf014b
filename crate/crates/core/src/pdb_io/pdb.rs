use super::PdbError;
use crate::geometry::{Chain, Point};

/// One α-carbon trace.
#[derive(Debug, Clone, PartialEq)]
pub struct BackboneRecord {
    /// From the HEADER record; empty when the file has none.
    pub pdb_id: String,
    pub chain_id: char,
    pub chain: Chain,
    pub residue_numbers: Vec<i32>,
}

/// Residue selection rules.
#[derive(Debug, Clone, PartialEq)]
pub struct PdbOptions {
    /// Alternate location kept besides blank.
    pub altloc: char,
    /// MODEL serial to read; `None` reads the first model in the file.
    pub model: Option<u32>,
    pub include_hetatm: bool,
}

impl Default for PdbOptions {
    fn default() -> Self {
        PdbOptions { altloc: 'A', model: None, include_hetatm: false }
    }
}

/// Splits `file.pdb:A` into the path and the chain identifier.
pub fn split_selector(spec: &str) -> Option<(&str, char)> {
    let (path, chain) = spec.rsplit_once(':')?;
    let mut chars = chain.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) if !path.is_empty() => Some((path, c)),
        _ => None,
    }
}

/// Columns `from..=to`, 1-based as in the format description.
fn field(line: &str, from: usize, to: usize) -> &str {
    line.get(from - 1..to.min(line.len())).unwrap_or("")
}

fn number<T: std::str::FromStr>(line: &str, no: usize, from: usize, to: usize, name: &str) -> Result<T, PdbError> {
    let text = field(line, from, to).trim();
    text.parse().map_err(|_| PdbError::Malformed {
        line: no,
        message: format!("bad {name} field {text:?} in columns {from}-{to}"),
    })
}

/// α-carbon trace of one chain with the default selection rules.
pub fn parse_pdb(text: &str, chain_id: char) -> Result<BackboneRecord, PdbError> {
    parse_pdb_with(text, chain_id, &PdbOptions::default())
}

/// α-carbon trace of one chain.
///
/// Keeps ATOM records (and HETATM if asked) named ` CA ` in the requested
/// chain and model, with a blank or the chosen alternate location. Each
/// residue number is used once, at its first occurrence, and only while the
/// numbers keep increasing, so insertion codes and repeated residues are
/// dropped.
pub fn parse_pdb_with(text: &str, chain_id: char, options: &PdbOptions) -> Result<BackboneRecord, PdbError> {
    let mut pdb_id = String::new();
    let mut points = Vec::new();
    let mut residues: Vec<i32> = Vec::new();
    let mut chain_seen = false;
    // None until a MODEL record; files without one are a single model.
    let mut current_model: Option<u32> = None;
    let mut model_found = false;
    let mut models_done = false;

    for (k, line) in text.lines().enumerate() {
        let no = k + 1;
        let record = field(line, 1, 6);
        match record {
            "HEADER" => pdb_id = field(line, 63, 66).trim().to_owned(),
            "MODEL " => {
                let serial = number(line, no, 11, 14, "model serial")?;
                current_model = Some(serial);
                model_found |= options.model.is_none_or(|m| m == serial);
            }
            "ENDMDL" => {
                let wanted = match options.model {
                    None => true,
                    Some(m) => current_model == Some(m),
                };
                if wanted {
                    models_done = true;
                }
            }
            _ => {}
        }
        if models_done {
            break;
        }
        let is_atom = record == "ATOM  " || (options.include_hetatm && record == "HETATM");
        if !is_atom {
            continue;
        }
        if let Some(want) = options.model {
            if current_model.unwrap_or(1) != want {
                continue;
            }
        }
        if !field(line, 22, 22).starts_with(chain_id) {
            continue;
        }
        chain_seen = true;
        if field(line, 13, 16) != " CA " {
            continue;
        }
        let alt = field(line, 17, 17).chars().next().unwrap_or(' ');
        if alt != ' ' && alt != options.altloc {
            continue;
        }
        let seq: i32 = number(line, no, 23, 26, "residue number")?;
        if residues.last().is_some_and(|&last| seq <= last) {
            continue;
        }
        let x = number(line, no, 31, 38, "x")?;
        let y = number(line, no, 39, 46, "y")?;
        let z = number(line, no, 47, 54, "z")?;
        points.push(Point::new3(x, y, z));
        residues.push(seq);
    }

    if let Some(m) = options.model {
        let present = if current_model.is_some() { model_found } else { m == 1 };
        if !present {
            return Err(PdbError::Format(format!("model {m} not found")));
        }
    }
    if !chain_seen {
        return Err(PdbError::ChainNotFound(chain_id));
    }
    if points.is_empty() {
        return Err(PdbError::EmptySelection(chain_id));
    }
    Ok(BackboneRecord { pdb_id, chain_id, chain: Chain::new(points)?, residue_numbers: residues })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom(record: &str, name: &str, alt: char, chain: char, seq: i32, xyz: [f64; 3]) -> String {
        format!(
            "{record:<6}{serial:>5} {name:<4}{alt}{res:>3} {chain}{seq:>4}    {x:>8.3}{y:>8.3}{z:>8.3}  1.00 20.00           C",
            serial = 1,
            res = "ALA",
            x = xyz[0],
            y = xyz[1],
            z = xyz[2],
        )
    }

    #[test]
    fn two_atoms() {
        let text = [
            "HEADER    TEST                                    01-JAN-00   9XYZ".to_owned(),
            atom("ATOM", " CA ", ' ', 'A', 1, [11.104, 6.134, -6.504]),
            atom("ATOM", " CB ", ' ', 'A', 1, [0.0, 0.0, 0.0]),
            atom("ATOM", " CA ", ' ', 'A', 2, [-1.5, 22.25, 3.0]),
        ]
        .join("\n");
        let rec = parse_pdb(&text, 'A').unwrap();
        assert_eq!(rec.pdb_id, "9XYZ");
        assert_eq!(rec.chain.len(), 2);
        assert_eq!(rec.chain.point(0).coords(), &[11.104, 6.134, -6.504]);
        assert_eq!(rec.chain.point(1).coords(), &[-1.5, 22.25, 3.0]);
        assert_eq!(rec.residue_numbers, vec![1, 2]);
    }

    #[test]
    fn abutting_coordinates() {
        // negative values fill the 8-column fields completely
        let line = "ATOM      2  CA  GLY A   7    -100.123-200.456-300.789  1.00  0.00           C";
        let rec = parse_pdb(line, 'A').unwrap();
        assert_eq!(rec.chain.point(0).coords(), &[-100.123, -200.456, -300.789]);
    }

    #[test]
    fn selection_rules() {
        let text = [
            atom("ATOM", " CA ", 'A', 'A', 1, [1.0, 0.0, 0.0]),
            atom("ATOM", " CA ", 'B', 'A', 1, [9.0, 0.0, 0.0]),
            atom("ATOM", " CA ", 'B', 'A', 2, [9.0, 0.0, 0.0]),
            atom("ATOM", " CA ", ' ', 'B', 2, [7.0, 0.0, 0.0]),
            atom("HETATM", " CA ", ' ', 'A', 3, [3.0, 0.0, 0.0]),
            atom("ATOM", " CA ", ' ', 'A', 4, [4.0, 0.0, 0.0]),
            // insertion code: same residue number again
            atom("ATOM", " CA ", ' ', 'A', 4, [5.0, 0.0, 0.0]),
            atom("ATOM", " CA ", ' ', 'A', 3, [6.0, 0.0, 0.0]),
        ]
        .join("\n");
        let rec = parse_pdb(&text, 'A').unwrap();
        assert_eq!(rec.residue_numbers, vec![1, 4]);
        let xs: Vec<f64> = rec.chain.points().iter().map(|p| p.coords()[0]).collect();
        assert_eq!(xs, vec![1.0, 4.0]);

        let opts = PdbOptions { include_hetatm: true, altloc: 'B', ..Default::default() };
        let rec = parse_pdb_with(&text, 'A', &opts).unwrap();
        assert_eq!(rec.residue_numbers, vec![1, 2, 3, 4]);
        assert_eq!(rec.chain.point(0).coords()[0], 9.0);
    }

    #[test]
    fn models() {
        let text = [
            "MODEL        1".to_owned(),
            atom("ATOM", " CA ", ' ', 'A', 1, [1.0, 0.0, 0.0]),
            "ENDMDL".to_owned(),
            "MODEL        2".to_owned(),
            atom("ATOM", " CA ", ' ', 'A', 1, [2.0, 0.0, 0.0]),
            atom("ATOM", " CA ", ' ', 'A', 2, [2.0, 1.0, 0.0]),
            "ENDMDL".to_owned(),
        ]
        .join("\n");
        assert_eq!(parse_pdb(&text, 'A').unwrap().chain.len(), 1);
        let second = PdbOptions { model: Some(2), ..Default::default() };
        assert_eq!(parse_pdb_with(&text, 'A', &second).unwrap().chain.len(), 2);
        let missing = PdbOptions { model: Some(3), ..Default::default() };
        assert!(parse_pdb_with(&text, 'A', &missing).is_err());
    }

    #[test]
    fn errors() {
        let good = atom("ATOM", " CA ", ' ', 'A', 1, [1.0, 0.0, 0.0]);
        assert!(matches!(parse_pdb(&good, 'Z'), Err(PdbError::ChainNotFound('Z'))));
        let cb = atom("ATOM", " CB ", ' ', 'A', 1, [1.0, 0.0, 0.0]);
        assert!(matches!(parse_pdb(&cb, 'A'), Err(PdbError::EmptySelection('A'))));
        let bad = format!(
            "{good}\n{}",
            atom("ATOM", " CA ", ' ', 'A', 2, [1.0, 0.0, 0.0]).replacen("   1.000", "   1.0x0", 1)
        );
        match parse_pdb(&bad, 'A') {
            Err(PdbError::Malformed { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(parse_pdb("", 'A').is_err());
    }

    #[test]
    fn selectors() {
        assert_eq!(split_selector("data/1hfj.pdb:C"), Some(("data/1hfj.pdb", 'C')));
        assert_eq!(split_selector("chain.csv"), None);
        assert_eq!(split_selector("x.pdb:AB"), None);
    }
}
