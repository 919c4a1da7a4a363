use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::marked_graph::{MarkSpaces, Side};

const DIST_TOL: f64 = 1e-12;

fn check_distribution(name: &str, v: &[f64]) -> Result<()> {
    if v.iter().any(|&x| !x.is_finite() || x < 0.0) {
        return invalid(format!("{name} must be nonnegative and finite"));
    }
    let total: f64 = v.iter().sum();
    if (total - 1.0).abs() > DIST_TOL {
        return invalid(format!("{name} sums to {total}, expected 1"));
    }
    Ok(())
}

/// Sums a joint-edge-indexed vector over the other coordinate. The result has
/// `|Ξᵢ| + 1` entries with the placeholder coordinate last.
pub fn edge_marginal(values: &[f64], side: Side, marks: &MarkSpaces) -> Vec<f64> {
    let ne = marks.edge_alphabet(side).len();
    let mut out = vec![0.0; ne + 1];
    for (i, &v) in values.iter().enumerate() {
        let x = marks.joint_edge_mark(i).expect("joint index");
        out[x.get(side).map_or(ne, usize::from)] += v;
    }
    out
}

pub fn vertex_marginal(values: &[f64], side: Side, marks: &MarkSpaces) -> Vec<f64> {
    let mut out = vec![0.0; marks.vertex_alphabet(side).len()];
    for (i, &v) in values.iter().enumerate() {
        out[usize::from(marks.joint_vertex_mark(i).expect("joint index").get(side))] += v;
    }
    out
}

fn check_coordinate_positivity(name: &str, values: &[f64], marks: &MarkSpaces) -> Result<()> {
    for side in Side::BOTH {
        let sums = edge_marginal(values, side, marks);
        if let Some(i) = sums.iter().position(|&s| s <= 0.0) {
            let sym = marks.edge_symbol(side, (i < sums.len() - 1).then_some(i as u16));
            return invalid(format!(
                "{name}: coordinate sum for mark {sym} of domain {} must be positive",
                side.index()
            ));
        }
    }
    Ok(())
}

/// Marked Erdős–Rényi ensemble: pair `(i, j)` carries mark `x` with probability `p_x / n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErModel {
    marks: MarkSpaces,
    p: Vec<f64>,
    q: Vec<f64>,
}

impl ErModel {
    /// `p` is indexed by joint edge index, `q` by joint vertex index.
    pub fn new(marks: MarkSpaces, p: Vec<f64>, q: Vec<f64>) -> Result<Self> {
        let m = Self::new_joint_only(marks, p, q)?;
        check_coordinate_positivity("p", &m.p, &m.marks)?;
        Ok(m)
    }

    /// Like [`ErModel::new`] but without the per-coordinate positivity
    /// conditions, which only matter for the marginal ensembles. Allows a
    /// single joint mark, e.g. the plain unmarked ER graph.
    pub fn new_joint_only(marks: MarkSpaces, p: Vec<f64>, q: Vec<f64>) -> Result<Self> {
        if p.len() != marks.joint_edge_count() || q.len() != marks.joint_vertex_count() {
            return invalid("p and q must be indexed by the joint alphabets");
        }
        if p.iter().any(|&x| !x.is_finite() || x < 0.0) {
            return invalid("edge intensities must be nonnegative and finite");
        }
        check_distribution("q", &q)?;
        if p.iter().sum::<f64>() <= 0.0 {
            return invalid("total edge intensity must be positive");
        }
        Ok(Self { marks, p, q })
    }

    pub fn marks(&self) -> &MarkSpaces {
        &self.marks
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    pub fn total_intensity(&self) -> f64 {
        self.p.iter().sum()
    }

    /// `p_{xᵢ}` for `xᵢ ∈ Ξᵢ` (placeholder slot dropped).
    pub fn p_marginal(&self, side: Side) -> Vec<f64> {
        let mut v = edge_marginal(&self.p, side, &self.marks);
        v.pop();
        v
    }

    pub fn q_marginal(&self, side: Side) -> Vec<f64> {
        vertex_marginal(&self.q, side, &self.marks)
    }
}

/// Marked configuration-model ensemble.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CmModel {
    marks: MarkSpaces,
    r: Vec<f64>,
    gamma: Vec<f64>,
    q: Vec<f64>,
    slack: f64,
}

impl CmModel {
    /// `r` has `Δ + 1` entries; `gamma` and `q` are indexed by the joint alphabets;
    /// `slack` is the constant `K` of the degree-sequence condition.
    pub fn new(marks: MarkSpaces, r: Vec<f64>, gamma: Vec<f64>, q: Vec<f64>, slack: f64) -> Result<Self> {
        let m = Self::new_joint_only(marks, r, gamma, q, slack)?;
        check_coordinate_positivity("gamma", &m.gamma, &m.marks)?;
        Ok(m)
    }

    /// [`CmModel::new`] without the per-coordinate positivity conditions on `gamma`.
    pub fn new_joint_only(
        marks: MarkSpaces,
        r: Vec<f64>,
        gamma: Vec<f64>,
        q: Vec<f64>,
        slack: f64,
    ) -> Result<Self> {
        if r.len() < 2 {
            return invalid("degree law must cover 0..=Δ with Δ >= 1");
        }
        if gamma.len() != marks.joint_edge_count() || q.len() != marks.joint_vertex_count() {
            return invalid("gamma and q must be indexed by the joint alphabets");
        }
        check_distribution("r", &r)?;
        check_distribution("gamma", &gamma)?;
        check_distribution("q", &q)?;
        if r[0] >= 1.0 {
            return invalid("r_0 must be < 1");
        }
        if !(slack.is_finite() && slack > 0.0) {
            return invalid("K must be positive");
        }
        Ok(Self { marks, r, gamma, q, slack })
    }

    pub fn marks(&self) -> &MarkSpaces {
        &self.marks
    }

    pub fn max_degree(&self) -> usize {
        self.r.len() - 1
    }

    pub fn r(&self) -> &[f64] {
        &self.r
    }

    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    pub fn slack(&self) -> f64 {
        self.slack
    }

    pub fn mean_degree(&self) -> f64 {
        self.r.iter().enumerate().map(|(k, &rk)| k as f64 * rk).sum()
    }

    /// `βᵢ = P(Γᵢ ≠ ∘ᵢ)`.
    pub fn beta(&self, side: Side) -> f64 {
        let m = edge_marginal(&self.gamma, side, &self.marks);
        m[..m.len() - 1].iter().sum()
    }

    /// Law of `Γᵢ` on `Ξᵢ ∪ {∘ᵢ}`, placeholder last.
    pub fn gamma_marginal(&self, side: Side) -> Vec<f64> {
        edge_marginal(&self.gamma, side, &self.marks)
    }

    pub fn q_marginal(&self, side: Side) -> Vec<f64> {
        vertex_marginal(&self.q, side, &self.marks)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum Model {
    Er(ErModel),
    Cm(CmModel),
}

impl Model {
    pub fn marks(&self) -> &MarkSpaces {
        match self {
            Model::Er(m) => m.marks(),
            Model::Cm(m) => m.marks(),
        }
    }
}

fn cfg_err<T>(line: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line, message: message.into() })
}

/// Parses a `key=value` model configuration.
///
/// Keys: `model=er|cm`, `xi1`, `xi2`, `theta1`, `theta2` (comma-separated
/// symbols), `p.<x1>:<x2>`, `q.<t1>:<t2>`, `delta`, `r.<k>`, `gamma.<x1>:<x2>`,
/// `K`. Unlisted `p`, `q`, `r`, `gamma` entries are zero. `#` starts a comment.
pub fn parse_model_config(text: &str) -> Result<Model> {
    let mut kind = None;
    let mut alphabets: [Option<Vec<String>>; 4] = Default::default();
    let mut p = Vec::new();
    let mut q = Vec::new();
    let mut gamma = Vec::new();
    let mut r = Vec::new();
    let mut delta = None;
    let mut slack = None;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let l = raw.split('#').next().unwrap_or("").trim();
        if l.is_empty() {
            continue;
        }
        let Some((key, value)) = l.split_once('=') else {
            return cfg_err(line, format!("expected key=value, got {l:?}"));
        };
        let (key, value) = (key.trim(), value.trim());
        let num = |v: &str| -> Result<f64> {
            v.parse::<f64>()
                .map_err(|_| Error::Parse { line, message: format!("bad number {v:?}") })
        };
        match key {
            "model" => kind = Some(value.to_string()),
            "xi1" | "xi2" | "theta1" | "theta2" => {
                let slot = ["xi1", "xi2", "theta1", "theta2"].iter().position(|k| *k == key).unwrap();
                alphabets[slot] = Some(value.split(',').map(|s| s.trim().to_string()).collect());
            }
            "delta" => {
                delta = Some(value.parse::<usize>().map_err(|_| Error::Parse {
                    line,
                    message: format!("bad delta {value:?}"),
                })?)
            }
            "K" => slack = Some(num(value)?),
            _ => {
                let Some((prefix, idx)) = key.split_once('.') else {
                    return cfg_err(line, format!("unknown key {key:?}"));
                };
                match prefix {
                    "p" => p.push((line, idx.to_string(), num(value)?)),
                    "q" => q.push((line, idx.to_string(), num(value)?)),
                    "gamma" => gamma.push((line, idx.to_string(), num(value)?)),
                    "r" => {
                        let k = idx.parse::<usize>().map_err(|_| Error::Parse {
                            line,
                            message: format!("bad degree index {idx:?}"),
                        })?;
                        r.push((line, k, num(value)?));
                    }
                    _ => return cfg_err(line, format!("unknown key {key:?}")),
                }
            }
        }
    }

    let [xi1, xi2, theta1, theta2] = alphabets;
    let (Some(xi1), Some(xi2), Some(theta1), Some(theta2)) = (xi1, xi2, theta1, theta2) else {
        return cfg_err(0, "xi1, xi2, theta1 and theta2 are required");
    };
    let marks = MarkSpaces::new(xi1, xi2, theta1, theta2)?;

    let edge_vec = |entries: &[(usize, String, f64)]| -> Result<Vec<f64>> {
        let mut v = vec![0.0; marks.joint_edge_count()];
        for (line, sym, val) in entries {
            let Some(x) = marks.parse_edge_pair(sym) else {
                return cfg_err(*line, format!("unknown joint edge mark {sym:?}"));
            };
            v[marks.joint_edge_index(x)] = *val;
        }
        Ok(v)
    };
    let mut qv = vec![0.0; marks.joint_vertex_count()];
    for (line, sym, val) in &q {
        let Some(t) = marks.parse_vertex_pair(sym) else {
            return cfg_err(*line, format!("unknown joint vertex mark {sym:?}"));
        };
        qv[marks.joint_vertex_index(t)] = *val;
    }

    match kind.as_deref() {
        Some("er") => Ok(Model::Er(ErModel::new(marks.clone(), edge_vec(&p)?, qv)?)),
        Some("cm") => {
            let Some(delta) = delta else {
                return cfg_err(0, "cm model requires delta");
            };
            let mut rv = vec![0.0; delta + 1];
            for (line, k, val) in r {
                if k > delta {
                    return cfg_err(line, format!("degree {k} exceeds delta {delta}"));
                }
                rv[k] = val;
            }
            let Some(slack) = slack else {
                return cfg_err(0, "cm model requires K");
            };
            Ok(Model::Cm(CmModel::new(marks.clone(), rv, edge_vec(&gamma)?, qv, slack)?))
        }
        Some(other) => cfg_err(0, format!("unknown model {other:?}")),
        None => cfg_err(0, "missing model=er|cm"),
    }
}

/// Writes a model back in configuration syntax (nonzero entries only).
pub fn format_model_config(model: &Model) -> String {
    let marks = model.marks();
    let mut out = String::new();
    let kind = match model {
        Model::Er(_) => "er",
        Model::Cm(_) => "cm",
    };
    writeln!(out, "model={kind}").unwrap();
    for side in Side::BOTH {
        writeln!(out, "xi{}={}", side.index(), marks.edge_alphabet(side).join(",")).unwrap();
    }
    for side in Side::BOTH {
        writeln!(out, "theta{}={}", side.index(), marks.vertex_alphabet(side).join(",")).unwrap();
    }
    let write_edges = |out: &mut String, key: &str, v: &[f64]| {
        for (i, &val) in v.iter().enumerate() {
            if val != 0.0 {
                let x = marks.joint_edge_mark(i).unwrap();
                writeln!(out, "{key}.{}={val}", marks.format_edge_pair(x)).unwrap();
            }
        }
    };
    let q = match model {
        Model::Er(m) => {
            write_edges(&mut out, "p", m.p());
            m.q()
        }
        Model::Cm(m) => {
            writeln!(out, "delta={}", m.max_degree()).unwrap();
            for (k, &rk) in m.r().iter().enumerate() {
                if rk != 0.0 {
                    writeln!(out, "r.{k}={rk}").unwrap();
                }
            }
            write_edges(&mut out, "gamma", m.gamma());
            writeln!(out, "K={}", m.slack()).unwrap();
            m.q()
        }
    };
    for (i, &val) in q.iter().enumerate() {
        if val != 0.0 {
            writeln!(out, "q.{}={val}", marks.format_vertex_pair(marks.joint_vertex_mark(i).unwrap()))
                .unwrap();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const ER: &str = "model=er\nxi1=a\nxi2=b\ntheta1=t\ntheta2=s\np.a:_=0.5\np._:b=0.5\np.a:b=1.0\nq.t:s=1\n";

    #[test]
    fn parses_er_config() {
        let Model::Er(m) = parse_model_config(ER).unwrap() else { panic!("expected er") };
        assert_eq!(m.total_intensity(), 2.0);
        assert_eq!(m.p_marginal(Side::First), vec![1.5]);
        assert_eq!(m.p_marginal(Side::Second), vec![1.5]);
    }

    #[test]
    fn config_round_trip() {
        let model = parse_model_config(ER).unwrap();
        assert_eq!(parse_model_config(&format_model_config(&model)).unwrap(), model);
        let cm = "model=cm\nxi1=a\nxi2=b\ntheta1=t\ntheta2=s\ndelta=3\nr.1=0.5\nr.3=0.5\n\
                  gamma.a:_=0.25\ngamma._:b=0.25\ngamma.a:b=0.5\nq.t:s=1\nK=2\n";
        let model = parse_model_config(cm).unwrap();
        assert_eq!(parse_model_config(&format_model_config(&model)).unwrap(), model);
    }

    #[test]
    fn rejects_invalid_models() {
        // missing (∘₁, b) mass: coordinate ∘₁ has zero intensity
        let bad = "model=er\nxi1=a\nxi2=b\ntheta1=t\ntheta2=s\np.a:_=0.5\np.a:b=1\nq.t:s=1\n";
        assert!(matches!(parse_model_config(bad), Err(Error::InvalidArgument(_))));
        let bad_q = ER.replace("q.t:s=1", "q.t:s=0.5");
        assert!(parse_model_config(&bad_q).is_err());
        let r0 = "model=cm\nxi1=a\nxi2=b\ntheta1=t\ntheta2=s\ndelta=2\nr.0=1\n\
                  gamma.a:_=0.5\ngamma._:b=0.5\nq.t:s=1\nK=1\n";
        assert!(parse_model_config(r0).is_err());
        let unknown = ER.replace("p.a:b", "p.z:b");
        assert!(matches!(parse_model_config(&unknown), Err(Error::Parse { line: 8, .. })));
    }

    #[test]
    fn cm_beta_and_marginals() {
        let marks = MarkSpaces::from_symbols(&["a"], &["b"], &["t"], &["s"]).unwrap();
        let mut gamma = vec![0.0; 3];
        gamma[marks.joint_edge_index(marks.parse_edge_pair("a:_").unwrap())] = 0.5;
        gamma[marks.joint_edge_index(marks.parse_edge_pair("a:b").unwrap())] = 0.25;
        gamma[marks.joint_edge_index(marks.parse_edge_pair("_:b").unwrap())] = 0.25;
        let m = CmModel::new(marks, vec![0.0, 0.0, 1.0], gamma, vec![1.0], 1.0).unwrap();
        assert_eq!(m.beta(Side::First), 0.75);
        assert_eq!(m.beta(Side::Second), 0.5);
        assert_eq!(m.mean_degree(), 2.0);
    }
}
