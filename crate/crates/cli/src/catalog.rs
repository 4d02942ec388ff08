use centralab::LipschitzFn;
use crate::config::Experiment;

#[derive(Clone, Debug)]
pub struct Entry {
    pub name: String,
    pub description: String,
}

#[derive(Clone, Debug)]
pub struct Catalog {
    pub symbols: Vec<Entry>,
    pub specs: Vec<Entry>,
    pub operations: Vec<Entry>,
    pub experiments: Vec<Entry>,
}

const SPECS: &[(&str, &str)] = &[
    ("kp_bicentralizer", "singular values reweighted by phi(-log(s_n/|f|_p), log n)"),
    ("lifted_quasilinear", "a quasilinear map on C^n applied to the final vectors of f"),
    ("lower_s", "Psi(u|h|^(p1/p2)) |h|^(p1/s), moving a centralizer down to S^p1 (spec kind lowered)"),
    ("localized", "f -> Phi(fe) for an orthogonal projection e"),
    ("right_multiplication", "f -> fg, a morphism of left modules"),
    ("left_composition", "f -> Lf, a morphism of right modules"),
    ("scaled", "a complex multiple of another spec"),
    ("sum", "pointwise sum of specs, the empty sum being zero"),
];

const OPERATIONS: &[(&str, &str)] = &[
    ("schatten_norm", "Schatten p-quasinorm for p in (0, inf]"),
    ("schmidt", "Schmidt expansion with the phase of every pair fixed"),
    ("holder_factor", "h = fg with |f|_p |g|_s = |h|_q where 1/q = 1/p + 1/s"),
    ("joint_root", "common positive root h with f = ah, g = bh"),
    ("estimate_constant", "seeded maximum of the Q, L, R or B ratio"),
    ("distance_estimate", "sampled distance between two maps"),
    ("fit_morphism", "least-squares one-sided morphism and its residual"),
    ("gamma_summing_mc", "Monte Carlo gamma-summing norm of an operator table"),
    ("twisted_quasinorm", "|(g, f)| = |g - Phi f|_Y + |f|_X"),
    ("splitting_distance", "residual of the best linear section across dimensions"),
];

fn entries(items: &[(&str, &str)]) -> Vec<Entry> {
    items
        .iter()
        .map(|(n, d)| Entry {
            name: n.to_string(),
            description: d.to_string(),
        })
        .collect()
}

pub fn catalog() -> Catalog {
    Catalog {
        symbols: entries(LipschitzFn::builtin_names()),
        specs: entries(SPECS),
        operations: entries(OPERATIONS),
        experiments: Experiment::ALL
            .iter()
            .map(|(e, d)| Entry {
                name: e.as_str().to_string(),
                description: d.to_string(),
            })
            .collect(),
    }
}

impl Catalog {
    /// Plain-text table, one row per entry.
    pub fn table(&self) -> String {
        let sections = [
            ("symbol", &self.symbols),
            ("spec", &self.specs),
            ("operation", &self.operations),
            ("experiment", &self.experiments),
        ];
        let width = sections
            .iter()
            .flat_map(|(_, es)| es.iter().map(|e| e.name.len()))
            .max()
            .unwrap_or(0);
        let mut out = format!("{:<10}  {:<width$}  description\n", "category", "name");
        for (category, es) in sections {
            for e in es.iter() {
                out.push_str(&format!("{category:<10}  {:<width$}  {}\n", e.name, e.description));
            }
        }
        out
    }
}
