//! Shared fixtures: the bundled 27-run design, orthogonal-array fixtures and
//! exhaustive enumerators.

#![allow(dead_code)]

use latmaj::design::{parse_design, Design, DesignFile};

pub const TABLE1: &str = include_str!("../../../../data/table1.txt");

pub fn table1() -> DesignFile {
    parse_design(TABLE1, None).expect("bundled design parses")
}

/// Projection by factor letters (A..H) onto the bundled design's columns.
pub fn project_letters(file: &DesignFile, letters: &str) -> Design {
    let labels = file.column_labels.as_ref().expect("table1 has labels");
    let mut cols: Vec<usize> = letters
        .chars()
        .map(|c| {
            labels
                .iter()
                .position(|l| l == &c.to_string())
                .expect("known label")
        })
        .collect();
    cols.sort_unstable();
    latmaj::design::project(&file.design, &cols)
        .expect("projection in range")
        .with_label(letters)
}

/// Saturated OA(4, 3, 2, 2): equidistant with all coincidences 1.
pub fn oa_4_3_2() -> Design {
    Design::new(
        &[vec![0, 0, 0], vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]],
        2,
        None,
    )
    .unwrap()
}

/// Saturated OA(9, 4, 3, 2): rows (a, b, a+b, a+2b) over GF(3).
pub fn oa_9_4_3() -> Design {
    let mut rows = Vec::new();
    for a in 0u32..3 {
        for b in 0u32..3 {
            rows.push(vec![a, b, (a + b) % 3, (a + 2 * b) % 3]);
        }
    }
    Design::new(&rows, 3, None).unwrap()
}

/// OA(8, 7, 2, 2) from the order-8 Sylvester Hadamard matrix.
pub fn hadamard_8_7() -> Design {
    let rows: Vec<Vec<u32>> = (0u32..8)
        .map(|i| (1u32..8).map(|j| (i & j).count_ones() % 2).collect())
        .collect();
    Design::new(&rows, 2, None).unwrap()
}

/// Six-factor Hadamard sub-design: attains the U(8, 2^6) benchmark
/// (12 coincidences of 2, 16 of 3).
pub fn hadamard_8_6() -> Design {
    let d = hadamard_8_7();
    latmaj::design::project(&d, &[0, 1, 2, 3, 4, 5]).unwrap()
}

/// Full factorial q^s.
pub fn full_factorial(q: u32, s: usize) -> Design {
    let n = (q as usize).pow(s as u32);
    let rows: Vec<Vec<u32>> = (0..n)
        .map(|mut i| {
            let mut row = vec![0u32; s];
            for j in (0..s).rev() {
                row[j] = (i % q as usize) as u32;
                i /= q as usize;
            }
            row
        })
        .collect();
    Design::new(&rows, q, None).unwrap()
}

/// Every balanced 4-run two-level design with `s` columns (6^s of them).
pub fn all_balanced_4_2(s: usize) -> Vec<Design> {
    let columns: [[u32; 4]; 6] = [
        [0, 0, 1, 1],
        [0, 1, 0, 1],
        [0, 1, 1, 0],
        [1, 0, 0, 1],
        [1, 0, 1, 0],
        [1, 1, 0, 0],
    ];
    let total = 6usize.pow(s as u32);
    let mut out = Vec::with_capacity(total);
    for mut code in 0..total {
        let mut rows: Vec<Vec<u32>> = (0..4).map(|_| Vec::with_capacity(s)).collect();
        for _ in 0..s {
            let col = &columns[code % 6];
            code /= 6;
            for (i, row) in rows.iter_mut().enumerate() {
                row.push(col[i]);
            }
        }
        out.push(Design::new(&rows, 2, None).unwrap());
    }
    out
}

/// Worked U(8, 2^6) starting design for the swap algorithm.
pub const U8_2_6: &str = "\
0 0 0 1 1 0
1 0 0 1 1 0
0 0 1 0 1 1
1 1 0 0 0 1
0 1 1 0 0 1
1 0 1 1 0 0
0 1 0 1 1 0
1 1 1 0 0 1";

pub fn swap_fixture() -> Design {
    parse_design(U8_2_6, Some(2)).unwrap().design
}
