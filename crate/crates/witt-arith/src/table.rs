//! Built-in irreducible polynomials defining `F_{p^r}` for `p <= 7`, `r <= 4`.

const TABLE: &[(u64, &[u64])] = &[
    (2, &[0, 1]),
    (2, &[1, 1, 1]),
    (2, &[1, 1, 0, 1]),
    (2, &[1, 1, 0, 0, 1]),
    (3, &[0, 1]),
    (3, &[2, 2, 1]),
    (3, &[1, 2, 0, 1]),
    (3, &[2, 0, 0, 2, 1]),
    (5, &[0, 1]),
    (5, &[2, 4, 1]),
    (5, &[3, 3, 0, 1]),
    (5, &[2, 4, 4, 0, 1]),
    (7, &[0, 1]),
    (7, &[3, 6, 1]),
    (7, &[4, 0, 6, 1]),
    (7, &[3, 4, 5, 0, 1]),
];

/// Monic irreducible polynomial of degree `r` over `F_p`, lowest coefficient first.
pub fn irreducible(p: u64, r: usize) -> &'static [u64] {
    TABLE
        .iter()
        .find(|(q, f)| *q == p && f.len() == r + 1)
        .map(|(_, f)| *f)
        .expect("caller checked p and r")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = a.to_vec();
        let lead_inv = (1..p).find(|x| x * b[b.len() - 1] % p == 1).unwrap();
        while a.len() >= b.len() {
            let c = a[a.len() - 1] * lead_inv % p;
            let s = a.len() - b.len();
            for (i, &bi) in b.iter().enumerate() {
                a[s + i] = (a[s + i] + p * p - c * bi % p) % p;
            }
            a.pop();
            while a.last() == Some(&0) {
                a.pop();
            }
        }
        a
    }

    #[test]
    fn table_entries_are_irreducible() {
        for &(p, f) in TABLE {
            let r = f.len() - 1;
            assert_eq!(f[r], 1);
            for d in 1..=r / 2 {
                let count = p.pow(d as u32);
                for n in 0..count {
                    let mut g: Vec<u64> = (0..d).map(|i| n / p.pow(i as u32) % p).collect();
                    g.push(1);
                    assert!(!rem(f, &g, p).is_empty(), "p={p} f={f:?} divisible by {g:?}");
                }
            }
        }
    }
}
