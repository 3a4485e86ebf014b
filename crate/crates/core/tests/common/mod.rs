#![allow(dead_code)]

use std::fmt::Write;

/// One fixed-column ATOM record.
pub fn atom(serial: usize, name: &str, chain: char, res_seq: i32, xyz: [f64; 3]) -> String {
    let [x, y, z] = xyz;
    format!("ATOM  {serial:>5} {name:<4} ALA {chain}{res_seq:>4}    {x:>8.3}{y:>8.3}{z:>8.3}  1.00  0.00           C")
}

/// A helix-like trace with consecutive CA atoms about 3.8 Å apart.
pub fn helix(len: usize, shift: [f64; 3]) -> Vec<[f64; 3]> {
    (0..len)
        .map(|i| {
            let t = i as f64 * 100f64.to_radians();
            [2.3 * t.cos() + shift[0], 2.3 * t.sin() + shift[1], 1.5 * i as f64 + shift[2]]
        })
        .collect()
}

/// A PDB entry with an N, CA and C atom per residue on each listed chain.
pub fn pdb_entry(chains: &[(char, Vec<[f64; 3]>)]) -> String {
    let mut out = String::from("HEADER    SYNTHETIC TEST ENTRY\n");
    let mut serial = 1;
    for (chain, trace) in chains {
        for (i, &p) in trace.iter().enumerate() {
            for (name, dx) in [(" N", -1.2), (" CA", 0.0), (" C", 1.2)] {
                let xyz = [p[0] + dx, p[1], p[2]];
                writeln!(out, "{}", atom(serial, name, *chain, i as i32 + 1, xyz)).unwrap();
                serial += 1;
            }
        }
        writeln!(out, "TER").unwrap();
    }
    out.push_str("END\n");
    out
}
