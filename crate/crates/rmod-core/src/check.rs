//! Relation checking for truncated modules.

use std::fmt;

use witt_arith::Gr;

use crate::linalg::{vec_scale, vec_sub};
use crate::module::Tgm;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub identity: &'static str,
    pub grading: i64,
    pub generator: String,
    pub witness: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RelationReport {
    pub violations: Vec<Violation>,
}

impl RelationReport {
    pub fn is_pass(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn failed_identities(&self) -> Vec<&'static str> {
        let mut ids: Vec<&'static str> = self.violations.iter().map(|v| v.identity).collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }
}

impl fmt::Display for RelationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "all relations hold");
        }
        for v in &self.violations {
            writeln!(f, "{} fails in grading {} on {}: {}", v.identity, v.grading, v.generator, v.witness)?;
        }
        Ok(())
    }
}

/// Checks `FV = VF = p`, `d^2 = 0`, `FdV = d`, semilinearity of `F`, `V`,
/// linearity of `d`, and that every operator preserves the relations.
/// Identities involving `F` are tested modulo `Fil^{n-1}`.
pub fn check_relations(m: &Tgm) -> RelationReport {
    let ring = m.ring();
    let mut out = Vec::new();
    let fmt_vec = |x: &[Gr]| -> String {
        let parts: Vec<String> = x.iter().map(|&c| ring.fmt_elt(c)).collect();
        format!("({})", parts.join(", "))
    };
    let omega = ring.generator();
    let p = ring.p_pow(1);
    for g in m.gradings() {
        let n = m.dim(g);
        let labels = m.labels(g);
        let mut push = |identity: &'static str, k: usize, w: &[Gr], grading: i64| {
            out.push(Violation {
                identity,
                grading,
                generator: labels.get(k).cloned().unwrap_or_else(|| format!("relation {k}")),
                witness: fmt_vec(w),
            });
        };
        for (k, c) in m.rel(g).cols_iter().enumerate() {
            let fc = m.apply_f(g, &c);
            if !m.is_zero_mod_f_slack(g, &fc) {
                push("F preserves relations", k, &fc, g);
            }
            let vc = m.apply_v(g, &c);
            if !m.is_zero_in(g, &vc) {
                push("V preserves relations", k, &vc, g);
            }
            let dc = m.apply_d(g, &c);
            if !m.is_zero_in(g + 1, &dc) {
                push("d preserves relations", k, &dc, g + 1);
            }
        }
        for k in 0..n {
            let mut e = vec![Gr::ZERO; n];
            e[k] = ring.one();
            let pe = vec_scale(ring, &e, p);
            let fv = vec_sub(ring, &m.apply_f(g, &m.apply_v(g, &e)), &pe);
            if !m.is_zero_mod_f_slack(g, &fv) {
                push("FV = p", k, &fv, g);
            }
            let vf = vec_sub(ring, &m.apply_v(g, &m.apply_f(g, &e)), &pe);
            if !m.is_zero_mod_f_slack(g, &vf) {
                push("VF = p", k, &vf, g);
            }
            let de = m.apply_d(g, &e);
            let dd = m.apply_d(g + 1, &de);
            if !m.is_zero_in(g + 2, &dd) {
                push("d^2 = 0", k, &dd, g + 2);
            }
            let fdv = vec_sub(ring, &m.apply_f(g + 1, &m.apply_d(g, &m.apply_v(g, &e))), &de);
            if !m.is_zero_mod_f_slack(g + 1, &fdv) {
                push("FdV = d", k, &fdv, g + 1);
            }
            if ring.r() > 1 {
                let we = vec_scale(ring, &e, omega);
                let fa = vec_sub(ring, &m.apply_f(g, &we), &vec_scale(ring, &m.apply_f(g, &e), ring.sigma(omega)));
                if !m.is_zero_mod_f_slack(g, &fa) {
                    push("Fa = sigma(a)F", k, &fa, g);
                }
                let va = vec_sub(
                    ring,
                    &m.apply_v(g, &we),
                    &vec_scale(ring, &m.apply_v(g, &e), ring.sigma_inv(omega)),
                );
                if !m.is_zero_in(g, &va) {
                    push("Va = sigma^-1(a)V", k, &va, g);
                }
                let da = vec_sub(ring, &m.apply_d(g, &we), &vec_scale(ring, &de, omega));
                if !m.is_zero_in(g + 1, &da) {
                    push("da = ad", k, &da, g + 1);
                }
            }
        }
    }
    RelationReport { violations: out }
}
