//! r-partite linear loose-triangle-free templates H(A, Z_t).
//!
//! Part `i` occupies vertices `[i*t, (i+1)*t)`. For every `g in Z_t` and
//! `a in A` there is one edge `{ i*t + (g + i*a) mod t : i = 0..r-1 }`.

use crate::apfree::{self, Ambient, ApFreeSet};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::io::HypergraphFile;

/// Templates with more edges than this are built but not certified.
pub const DEFAULT_VERIFY_CAP: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Template {
    pub graph: Hypergraph,
    pub r: usize,
    pub t: u64,
    pub a: ApFreeSet,
    /// Linearity and loose-triangle-freeness checked by enumeration.
    pub verified: bool,
}

impl Template {
    pub fn vertex_count(&self) -> u64 {
        self.r as u64 * self.t
    }

    /// Probability that a uniformly random map of an r-set into the template
    /// vertices lands on an edge: `e(G_t) * r! / |V(G_t)|^r`.
    pub fn keep_probability(&self) -> f64 {
        let r = self.r as i32;
        let fact: f64 = (1..=self.r).map(|i| i as f64).product();
        self.graph.m() as f64 * fact / (self.vertex_count() as f64).powi(r)
    }

    /// Part index of template vertex `v`.
    pub fn part_of(&self, v: u32) -> usize {
        (v as u64 / self.t) as usize
    }

    /// Comment line recording the construction parameters.
    pub fn header_comment(&self) -> String {
        let a: Vec<String> = self.a.elements.iter().map(u64::to_string).collect();
        format!(" template r={} t={} A={}", self.r, self.t, a.join(","))
    }

    pub fn to_text(&self) -> String {
        HypergraphFile {
            comments: vec![self.header_comment()],
            graph: self.graph.clone(),
        }
        .to_text()
    }

    /// Parses a template file and rebuilds the template from its header,
    /// rejecting files whose edges disagree with the construction.
    pub fn from_text(text: &str, verify_cap: usize) -> Result<Self> {
        let file = HypergraphFile::parse(text)?;
        let header = file
            .comments
            .iter()
            .find_map(|c| c.trim().strip_prefix("template "))
            .ok_or_else(|| Error::Parse {
                line: 1,
                msg: "missing `# template r=<r> t=<t> A=<list>` comment".into(),
            })?;
        let (mut r, mut t, mut a) = (None, None, None);
        for field in header.split_whitespace() {
            let bad = || Error::Parse {
                line: 1,
                msg: format!("bad template field {field:?}"),
            };
            let (key, value) = field.split_once('=').ok_or_else(bad)?;
            match key {
                "r" => r = Some(value.parse::<usize>().map_err(|_| bad())?),
                "t" => t = Some(value.parse::<u64>().map_err(|_| bad())?),
                "A" => {
                    a = Some(if value.is_empty() {
                        Vec::new()
                    } else {
                        value
                            .split(',')
                            .map(|x| x.parse::<u64>().map_err(|_| bad()))
                            .collect::<Result<Vec<_>>>()?
                    })
                }
                _ => return Err(bad()),
            }
        }
        let missing = |what: &str| Error::Parse {
            line: 1,
            msg: format!("template comment lacks {what}"),
        };
        let r = r.ok_or_else(|| missing("r"))?;
        let t = t.ok_or_else(|| missing("t"))?;
        let a = a.ok_or_else(|| missing("A"))?;
        if t == 0 {
            return Err(Error::BadModulus { t, r });
        }
        let set = ApFreeSet::user(a, Ambient::Cyclic(t), required_order(r))?;
        let template = rs_template_capped(&set, t, r, verify_cap)?;
        if template.graph != file.graph {
            return Err(Error::Parse {
                line: 1,
                msg: "edges do not match the template parameters".into(),
            });
        }
        Ok(template)
    }
}

/// Weight order a difference set needs for an r-uniform template.
pub fn required_order(r: usize) -> u32 {
    (r.saturating_sub(1) as u32).max(2)
}

pub fn is_prime(t: u64) -> bool {
    if t < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= t {
        if t.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn next_prime(from: u64) -> u64 {
    (from.max(2)..).find(|&t| is_prime(t)).unwrap()
}

pub fn rs_template(a: &ApFreeSet, t: u64, r: usize) -> Result<Template> {
    rs_template_capped(a, t, r, DEFAULT_VERIFY_CAP)
}

/// Builds H(A, Z_t) and certifies it when it has at most `verify_cap` edges.
pub fn rs_template_capped(a: &ApFreeSet, t: u64, r: usize, verify_cap: usize) -> Result<Template> {
    if r < 2 || !is_prime(t) || t < r as u64 {
        return Err(Error::BadModulus { t, r });
    }
    if a.ambient != Ambient::Cyclic(t) || !a.verified {
        return Err(Error::UnverifiedDifferenceSet { r });
    }
    let order = required_order(r);
    if a.order < order && !apfree::verify_free(&a.elements, a.ambient, order) {
        return Err(Error::UnverifiedDifferenceSet { r });
    }
    let n = u32::try_from(r as u64 * t).map_err(|_| {
        Error::InvalidParameter(format!("template on {r}*{t} vertices is too large"))
    })?;

    let mut edges: Vec<Vec<u32>> = Vec::with_capacity(a.len() * t as usize);
    for g in 0..t {
        for &d in &a.elements {
            edges.push(
                (0..r as u64)
                    .map(|i| (i * t + (g + i * d) % t) as u32)
                    .collect(),
            );
        }
    }
    let graph = Hypergraph::build(n, r, edges)?;

    let verified = graph.m() <= verify_cap;
    if verified {
        if !graph.is_linear() {
            return Err(Error::CertificationFailed(format!(
                "H(A, Z_{t}) with r = {r} is not linear"
            )));
        }
        if !graph.is_tfree() {
            return Err(Error::CertificationFailed(format!(
                "H(A, Z_{t}) with r = {r} contains a loose triangle"
            )));
        }
    }
    Ok(Template {
        graph,
        r,
        t,
        a: a.clone(),
        verified,
    })
}

/// Template with modulus the smallest prime `>= max(t_target, r)` and the
/// largest available progression-free difference set that embeds safely.
pub fn template_for(t_target: u64, r: usize) -> Result<Template> {
    template_for_capped(t_target, r, DEFAULT_VERIFY_CAP)
}

pub fn template_for_capped(t_target: u64, r: usize, verify_cap: usize) -> Result<Template> {
    if r < 2 {
        return Err(Error::InvalidParameter(format!("uniformity {r} < 2")));
    }
    let t = next_prime(t_target.max(r as u64));
    let order = required_order(r);
    let factor = (order as u64).max(3);
    let bound = ((t - 1) / factor).max(1);
    let set = apfree::best_free(bound, order);
    let a = apfree::embed_cyclic(&set, t)?;
    rs_template_capped(&a, t, r, verify_cap)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(elements: Vec<u64>, t: u64) -> ApFreeSet {
        ApFreeSet::user(elements, Ambient::Cyclic(t), 2).unwrap()
    }

    #[test]
    fn small_template() {
        let tpl = rs_template(&cyclic(vec![1, 2], 5), 5, 3).unwrap();
        assert_eq!(tpl.graph.n(), 15);
        assert_eq!(tpl.graph.m(), 10);
        assert!(tpl.verified);
        assert!(tpl.graph.is_linear());
        assert!(tpl.graph.is_tfree());
        assert!((tpl.keep_probability() - 60.0 / 3375.0).abs() < 1e-15);
    }

    #[test]
    fn empty_difference_set() {
        let tpl = rs_template(&cyclic(vec![], 7), 7, 3).unwrap();
        assert_eq!((tpl.graph.n(), tpl.graph.m()), (21, 0));
    }

    #[test]
    fn rejects_bad_modulus() {
        let a = ApFreeSet::user(vec![1], Ambient::Cyclic(4), 2).unwrap();
        assert!(matches!(
            rs_template(&a, 4, 3),
            Err(Error::BadModulus { .. })
        ));
        let a = ApFreeSet::user(vec![1], Ambient::Cyclic(3), 2).unwrap();
        assert!(matches!(
            rs_template(&a, 3, 4),
            Err(Error::BadModulus { .. })
        ));
    }

    #[test]
    fn rejects_unverified_or_mismatched_sets() {
        let mut a = cyclic(vec![1, 2], 5);
        a.verified = false;
        assert!(rs_template(&a, 5, 3).is_err());
        let a = cyclic(vec![1, 2], 7);
        assert!(rs_template(&a, 5, 3).is_err());
    }

    #[test]
    fn plain_3ap_free_set_is_not_enough_for_r4() {
        // {0,1,3} is 3-AP-free but 3*1 = 3 + 2*0; the 4-partite template has
        // a loose triangle, so construction must be refused.
        let a = cyclic(vec![0, 1, 3], 13);
        assert!(rs_template(&a, 13, 3).unwrap().verified);
        assert!(matches!(
            rs_template(&a, 13, 4),
            Err(Error::UnverifiedDifferenceSet { r: 4 })
        ));
        // bypassing the order check exposes the triangle
        let mut forged = a.clone();
        forged.order = 3;
        assert!(matches!(
            rs_template(&forged, 13, 4),
            Err(Error::CertificationFailed(_))
        ));
    }

    #[test]
    fn template_for_examples() {
        let tpl = template_for(5, 3).unwrap();
        assert_eq!((tpl.t, tpl.a.len(), tpl.graph.m()), (5, 1, 5));
        let tpl = template_for(100, 3).unwrap();
        assert_eq!(tpl.t, 101);
        assert!(tpl.verified);
        let tpl = template_for(2, 5).unwrap();
        assert_eq!(tpl.t, 5);
        assert_eq!(tpl.graph.n(), 25);
        assert!(tpl.verified);
        let tpl = template_for(2, 3).unwrap();
        assert_eq!((tpl.t, tpl.a.elements.clone()), (3, vec![0]));
    }

    #[test]
    fn parts_are_injective_pairwise() {
        let tpl = template_for(31, 4).unwrap();
        for i in 0..4 {
            for j in (i + 1)..4 {
                let mut seen = std::collections::HashSet::new();
                for e in tpl.graph.edges() {
                    assert!(seen.insert((e[i], e[j])));
                }
            }
        }
        for e in tpl.graph.edges() {
            for (i, &v) in e.iter().enumerate() {
                assert_eq!(tpl.part_of(v), i);
            }
        }
    }

    #[test]
    fn file_round_trip() {
        let tpl = template_for(13, 3).unwrap();
        let text = tpl.to_text();
        assert!(text.starts_with("# template r=3 t=13 A=0,1,3\n"));
        let back = Template::from_text(&text, DEFAULT_VERIFY_CAP).unwrap();
        // the construction method is not recorded in the file
        assert_eq!(back.graph, tpl.graph);
        assert_eq!((back.r, back.t), (tpl.r, tpl.t));
        assert_eq!(back.a.elements, tpl.a.elements);
        assert!(back.verified);
        let tampered = text.replacen("t=13", "t=11", 1);
        assert!(Template::from_text(&tampered, DEFAULT_VERIFY_CAP).is_err());
    }

    #[test]
    fn primes() {
        let ps: Vec<u64> = (0..30).filter(|&t| is_prime(t)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(next_prime(100), 101);
        assert_eq!(next_prime(0), 2);
    }
}
