//! JSON and CSV forms for the machine-facing surface.
//!
//! Every coefficient travels as an exact rational string `a/b` (plain `a`
//! when the denominator is 1); Grassmann masks travel as 0/1 bit lists so
//! files stay readable.

use serde::{Deserialize, Serialize};

use superwitt::glmn::GlRep;
use superwitt::jet::jets::{JetElement, JetKey};
use superwitt::jet::JetTag;
use superwitt::linalg::QMatrix;
use superwitt::scalar::{window, Scalar};
use superwitt::superalg::{Context, Monomial, SuperPoly};
use superwitt::tensormod::{TensorModule, TensorVector, TvKey};
use superwitt::verma::RadicalReport;
use superwitt::vfields::{AlgebraKind, Generator, VectorField};

pub fn scalar_str(c: &Scalar) -> String {
    c.to_string()
}

pub fn scalar_from_str(s: &str) -> Result<Scalar, String> {
    s.trim()
        .parse::<Scalar>()
        .map_err(|_| format!("'{s}' is not a rational number"))
}

pub fn mask_to_bits(mask: u32, n: usize) -> Vec<u8> {
    (0..n).map(|a| ((mask >> a) & 1) as u8).collect()
}

pub fn bits_to_mask(bits: &[u8]) -> Result<u32, String> {
    let mut mask = 0u32;
    for (a, b) in bits.iter().enumerate() {
        match b {
            0 => {}
            1 => mask |= 1 << a,
            _ => return Err(format!("bit {a} is {b}, expected 0 or 1")),
        }
    }
    Ok(mask)
}

pub fn gen_name(g: Generator) -> String {
    match g {
        Generator::D(i) => format!("d{i}"),
        Generator::P(a) => format!("p{a}"),
    }
}

pub fn gen_from_name(s: &str) -> Result<Generator, String> {
    let rest = || {
        s[1..]
            .parse::<usize>()
            .map_err(|_| format!("bad generator index in '{s}'"))
    };
    match s.chars().next() {
        Some('d') | Some('D') => Ok(Generator::D(rest()?)),
        Some('p') | Some('P') => Ok(Generator::P(rest()?)),
        _ => Err(format!("unknown generator '{s}'")),
    }
}

/// Tag strings for the jet alphabet: `d1..dm`, `p1..pn`, and `r0` for the
/// adjoined scalar row (which is distinct from any coordinate direction).
pub fn tag_name(t: JetTag) -> String {
    match t {
        JetTag::D(i) => format!("d{i}"),
        JetTag::P(a) => format!("p{a}"),
        JetTag::D0 => "r0".to_string(),
    }
}

pub fn tag_from_name(s: &str) -> Result<JetTag, String> {
    if s == "r0" {
        return Ok(JetTag::D0);
    }
    match gen_from_name(s)? {
        Generator::D(i) => Ok(JetTag::D(i)),
        Generator::P(a) => Ok(JetTag::P(a)),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolyTermForm {
    pub c: String,
    pub t: Vec<i64>,
    pub xi: Vec<u8>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolyForm {
    pub terms: Vec<PolyTermForm>,
}

pub fn poly_form(p: &SuperPoly) -> PolyForm {
    let n = p.ctx().n();
    PolyForm {
        terms: p
            .terms()
            .map(|(m, c)| PolyTermForm {
                c: scalar_str(c),
                t: m.t.clone(),
                xi: mask_to_bits(m.xi, n),
            })
            .collect(),
    }
}

pub fn poly_from_form(ctx: Context, form: &PolyForm) -> Result<SuperPoly, String> {
    let mut out = SuperPoly::zero(ctx);
    for term in &form.terms {
        if term.t.len() != ctx.even_count() {
            return Err(format!(
                "term has {} even exponents, expected {}",
                term.t.len(),
                ctx.even_count()
            ));
        }
        if term.xi.len() != ctx.n() {
            return Err(format!(
                "term has {} Grassmann bits, expected {}",
                term.xi.len(),
                ctx.n()
            ));
        }
        let mono = Monomial { t: term.t.clone(), xi: bits_to_mask(&term.xi)? };
        out.add_term(mono, scalar_from_str(&term.c)?);
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FieldTermForm {
    pub c: String,
    pub t: Vec<i64>,
    pub xi: Vec<u8>,
    pub gen: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FieldForm {
    pub terms: Vec<FieldTermForm>,
}

pub fn field_form(x: &VectorField) -> FieldForm {
    let n = x.kind().n();
    FieldForm {
        terms: x
            .terms()
            .map(|((m, g), c)| FieldTermForm {
                c: scalar_str(c),
                t: m.t.clone(),
                xi: mask_to_bits(m.xi, n),
                gen: gen_name(*g),
            })
            .collect(),
    }
}

pub fn field_from_form(kind: AlgebraKind, form: &FieldForm) -> Result<VectorField, String> {
    let ctx = kind.context();
    let mut out = VectorField::zero(kind);
    for term in &form.terms {
        if term.t.len() != ctx.even_count() || term.xi.len() != ctx.n() {
            return Err("term shape does not match the algebra kind".to_string());
        }
        let gen = gen_from_name(&term.gen)?;
        VectorField::generator(kind, gen).map_err(|e| e.to_string())?;
        let mono = Monomial { t: term.t.clone(), xi: bits_to_mask(&term.xi)? };
        out.add_term(mono, gen, scalar_from_str(&term.c)?);
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TvTermForm {
    pub c: String,
    pub r: Vec<i64>,
    pub p: Vec<u8>,
    pub j: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TvForm {
    pub terms: Vec<TvTermForm>,
}

pub fn tv_form(n: usize, w: &TensorVector) -> TvForm {
    TvForm {
        terms: w
            .terms()
            .map(|(k, c)| TvTermForm {
                c: scalar_str(c),
                r: k.r.clone(),
                p: mask_to_bits(k.p, n),
                j: k.j,
            })
            .collect(),
    }
}

pub fn tv_from_form(module: &TensorModule, form: &TvForm) -> Result<TensorVector, String> {
    let mut out = TensorVector::zero();
    for term in &form.terms {
        let key = TvKey { r: term.r.clone(), p: bits_to_mask(&term.p)?, j: term.j };
        out.add_term(key, scalar_from_str(&term.c)?);
    }
    module.validate_vector(&out).map_err(|e| e.to_string())?;
    Ok(out)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JetTermForm {
    pub gen: String,
    pub f: Vec<u8>,
    pub k: Vec<i64>,
    pub prefix: Vec<u8>,
    pub c: String,
}

pub fn jet_form(a: &JetElement) -> Vec<JetTermForm> {
    let n = a.shape().1;
    a.terms()
        .map(|(key, c)| JetTermForm {
            gen: tag_name(key.tag),
            f: mask_to_bits(key.f, n),
            k: key.shift.clone(),
            prefix: mask_to_bits(key.prefix, n),
            c: scalar_str(c),
        })
        .collect()
}

pub fn jet_from_form(m: usize, n: usize, terms: &[JetTermForm]) -> Result<JetElement, String> {
    let mut out = JetElement::zero(m, n);
    for term in terms {
        if term.k.len() != m {
            return Err(format!("jet shift has {} entries, expected {m}", term.k.len()));
        }
        let key = JetKey::new(
            tag_from_name(&term.gen)?,
            bits_to_mask(&term.f)?,
            term.k.clone(),
            bits_to_mask(&term.prefix)?,
        );
        out.add_term(key, scalar_from_str(&term.c)?);
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RepForm {
    pub m: usize,
    pub n: usize,
    /// Basis parities, 0 then 1, even block first.
    pub parity: Vec<u8>,
    /// Dense matrices in flat unit order, row-major rational strings.
    pub mats: Vec<Vec<Vec<String>>>,
}

pub fn rep_form(rep: &GlRep) -> RepForm {
    let (m, n) = rep.shape();
    let labels = rep.labels();
    let mut mats = Vec::with_capacity(labels.len() * labels.len());
    for a in &labels {
        for b in &labels {
            let mat = rep.rho_unit(*a, *b).expect("labels are valid");
            mats.push(
                (0..mat.rows())
                    .map(|i| mat.row(i).iter().map(scalar_str).collect())
                    .collect(),
            );
        }
    }
    RepForm {
        m,
        n,
        parity: (0..rep.dim()).map(|j| rep.vector_parity(j).is_odd() as u8).collect(),
        mats,
    }
}

pub fn rep_from_form(form: &RepForm) -> Result<GlRep, String> {
    let even_dim = form.parity.iter().take_while(|&&b| b == 0).count();
    let odd_dim = form.parity.len() - even_dim;
    if form.parity[even_dim..].iter().any(|&b| b != 1) {
        return Err("parity vector must list the even block first".to_string());
    }
    let dim = form.parity.len();
    let mut mats = Vec::with_capacity(form.mats.len());
    for raw in &form.mats {
        if raw.len() != dim || raw.iter().any(|r| r.len() != dim) {
            return Err("matrix shape does not match the parity vector".to_string());
        }
        let rows: Result<Vec<Vec<Scalar>>, String> = raw
            .iter()
            .map(|r| r.iter().map(|s| scalar_from_str(s)).collect())
            .collect();
        mats.push(QMatrix::from_rows(rows?).map_err(|e| e.to_string())?);
    }
    let rep = GlRep::from_matrices(form.m, form.n, even_dim, odd_dim, mats)
        .map_err(|e| e.to_string())?;
    rep.rep_check().map_err(|e| format!("matrices are not a representation: {e}"))?;
    Ok(rep)
}

/// Resolves a fiber name: `trivial`, `natural`, `dual`, `natural*natural`
/// (ASCII for the tensor square), or a path to a JSON file in [`RepForm`].
pub fn resolve_rep(ec: usize, n: usize, name: &str) -> Result<GlRep, String> {
    match name {
        "trivial" => Ok(GlRep::trivial(ec, n)),
        "natural" => Ok(GlRep::natural(ec, n)),
        "dual" => Ok(GlRep::natural(ec, n).dual()),
        "natural*natural" | "natural\u{2297}natural" => {
            let nat = GlRep::natural(ec, n);
            nat.tensor(&nat).map_err(|e| e.to_string())
        }
        path => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read fiber file '{path}': {e}"))?;
            let form: RepForm = serde_json::from_str(&text)
                .map_err(|e| format!("bad fiber JSON in '{path}': {e}"))?;
            if form.m != ec || form.n != n {
                return Err(format!(
                    "fiber file is for gl({},{}), the module needs gl({ec},{n})",
                    form.m, form.n
                ));
            }
            rep_from_form(&form)
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RadicalRow {
    pub degree: usize,
    pub module_dim: usize,
    pub radical_dim: usize,
    pub quotient_dim: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct RadicalForm {
    pub depth: usize,
    pub raise_depth: usize,
    /// True when lattice windowing may have dropped constraints, making the
    /// radical numbers upper bounds rather than exact values.
    pub windowed: bool,
    pub stabilized: bool,
    pub rows: Vec<RadicalRow>,
}

pub fn radical_form(report: &RadicalReport) -> RadicalForm {
    RadicalForm {
        depth: report.depth,
        raise_depth: report.raise_depth,
        windowed: report.windowed,
        stabilized: report.stabilized,
        rows: (0..report.m_dims.len())
            .map(|d| RadicalRow {
                degree: d,
                module_dim: report.m_dims[d],
                radical_dim: report.rad_dims[d],
                quotient_dim: report.l_dims[d],
            })
            .collect(),
    }
}

pub fn radical_csv(report: &RadicalReport) -> String {
    let mut out = String::from("degree,module_dim,radical_dim,quotient_dim,windowed,stabilized\n");
    for d in 0..report.m_dims.len() {
        out.push_str(&format!(
            "{d},{},{},{},{},{}\n",
            report.m_dims[d],
            report.rad_dims[d],
            report.l_dims[d],
            report.windowed,
            report.stabilized
        ));
    }
    out
}

/// Weight-multiplicity rows over the offset window `‖k‖∞ ≤ b`.
pub fn mult_rows(module: &TensorModule, b: i64) -> Vec<(Vec<i64>, usize)> {
    let lambda = module.lambda().to_vec();
    window(lambda.len(), b)
        .into_iter()
        .map(|k| {
            let mu: Vec<Scalar> = lambda
                .iter()
                .zip(k.iter())
                .map(|(l, o)| l + Scalar::from_integer((*o).into()))
                .collect();
            let dim = module.multiplicity(&mu);
            (k, dim)
        })
        .collect()
}

pub fn mult_csv(module: &TensorModule, b: i64) -> String {
    let ec = module.lambda().len();
    let mut out = String::new();
    for i in 1..=ec {
        out.push_str(&format!("k{i},"));
    }
    out.push_str("dimension\n");
    for (k, dim) in mult_rows(module, b) {
        for v in &k {
            out.push_str(&format!("{v},"));
        }
        out.push_str(&format!("{dim}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use superwitt::glmn::GlRep;
    use superwitt::scalar::{q, qi};
    use superwitt::vfields::AlgebraKind;

    #[test]
    fn poly_json_round_trips() {
        let kind = AlgebraKind::Plain { m: 2, n: 2 };
        let p = crate::parse::parse_poly(kind, "3/2*t1^-2*x1*x2 + t2").unwrap();
        let form = poly_form(&p);
        let text = serde_json::to_string(&form).unwrap();
        let back: PolyForm = serde_json::from_str(&text).unwrap();
        assert_eq!(poly_from_form(kind.context(), &back).unwrap(), p);
    }

    #[test]
    fn field_json_round_trips() {
        let kind = AlgebraKind::SemiDirect { m: 1, n: 1 };
        let x = crate::parse::parse_field(kind, "t1^-1*x1*D1 - 2*P1 + D0").unwrap();
        let back = field_from_form(kind, &field_form(&x)).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn tensor_vector_json_round_trips() {
        let kind = AlgebraKind::Plain { m: 1, n: 1 };
        let module = superwitt::tensormod::TensorModule::new(
            kind,
            GlRep::natural(1, 1),
            vec![q(1, 2)],
            None,
        )
        .unwrap();
        let mut w = TensorVector::zero();
        w.add_term(TvKey { r: vec![-2], p: 0b1, j: 1 }, q(3, 4));
        w.add_term(TvKey { r: vec![0], p: 0, j: 0 }, qi(-1));
        let back = tv_from_form(&module, &tv_form(1, &w)).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn jet_json_round_trips() {
        let mut a = JetElement::zero(1, 1);
        a.add_term(JetKey::new(JetTag::D(1), 0b1, vec![-1], 0), qi(2));
        a.add_term(JetKey::new(JetTag::D0, 0, vec![0], 0b1), q(1, 3));
        let back = jet_from_form(1, 1, &jet_form(&a)).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn rep_json_round_trips_and_is_checked() {
        let rep = GlRep::natural(1, 1);
        let form = rep_form(&rep);
        let back = rep_from_form(&form).unwrap();
        assert_eq!(back.shape(), (1, 1));
        assert_eq!(back.dim(), 2);
        let mut bad = form.clone();
        bad.mats[0][0][0] = "1/2".into();
        assert!(rep_from_form(&bad).is_err());
    }

    #[test]
    fn bad_bits_are_rejected() {
        assert!(bits_to_mask(&[0, 2]).is_err());
        assert_eq!(bits_to_mask(&[1, 0, 1]).unwrap(), 0b101);
        assert_eq!(mask_to_bits(0b101, 3), vec![1, 0, 1]);
    }

    #[test]
    fn multiplicity_rows_cover_the_offset_window() {
        let module = superwitt::tensormod::TensorModule::new(
            AlgebraKind::Plain { m: 1, n: 1 },
            GlRep::natural(1, 1),
            vec![q(1, 2)],
            None,
        )
        .unwrap();
        let rows = mult_rows(&module, 2);
        assert_eq!(rows.len(), 5);
        assert!(rows.iter().all(|(_, d)| *d == 4));
        let csv = mult_csv(&module, 1);
        assert!(csv.starts_with("k1,dimension\n"));
        assert_eq!(csv.lines().count(), 4);
    }
}
