//! Tables V/VI as typed in by hand, shared by the table tests.

/// Hand transcription: `snr  R G (1e-3)  R G (1e-4)  R G (1e-5)`.
const M2_ROWS: &str = "
3  0.1624 7.94  0.1624 9.31  0.1624 10.35
4  0.2346 6.94  0.2346 8.31  0.2346 9.35
5  0.3248 5.94  0.3248 7.31  0.3101 8.35
6  0.4304 4.94  0.4304 6.31  0.3889 7.35
7  0.5438 3.94  0.5438 5.31  0.4699 6.35
8  0.6513 2.94  0.6513 4.31  0.5458 5.35
9  0.7378 1.94  0.7378 3.31  0.6075 4.35
10 0.8003 0.94  0.8003 2.31  0.6479 3.35
11 0.8650 -0.06 0.8419 1.31  0.6671 2.35
12 0.9229 -1.06 0.8488 0.31  0.6732 1.35
13 0.9553 -2.06 0.8498 -0.69 0.6748 0.35
14 0.9685 -3.06 0.8508 -1.69 0.6754 -0.65
";

const M4_ROWS: &str = "
7  0.1613 7.37  0.1613 8.64  0.1613 9.62
8  0.2380 6.37  0.2380 7.64  0.2380 8.62
9  0.3365 5.37  0.3365 6.64  0.3190 7.62
10 0.4525 4.37  0.4525 5.64  0.4051 6.62
11 0.5754 3.37  0.5754 4.64  0.4925 5.62
12 0.6885 2.37  0.6885 3.64  0.5709 4.62
13 0.7681 1.37  0.7681 2.64  0.6289 3.62
14 0.8343 0.37  0.8343 1.64  0.6605 2.62
15 0.9032 -0.63 0.8468 0.64  0.6720 1.62
16 0.9486 -1.63 0.8498 -0.36 0.6746 0.62
17 0.9654 -2.63 0.8503 -1.36 0.6748 -0.38
";

pub const TARGETS: [f64; 3] = [1e-3, 1e-4, 1e-5];

pub fn transcribed(m: u32) -> Vec<(f64, [(f64, f64); 3])> {
    let text = if m == 2 { M2_ROWS } else { M4_ROWS };
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let v: Vec<f64> = l.split_whitespace().map(|x| x.parse().unwrap()).collect();
            (v[0], [(v[1], v[2]), (v[3], v[4]), (v[5], v[6])])
        })
        .collect()
}
