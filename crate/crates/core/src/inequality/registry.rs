use serde::Serialize;

use super::instance::{Ensemble, Shape};
use crate::error::{Error, Result};

/// Bumped whenever an entry's evaluation changes.
pub const REGISTRY_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    /// A known theorem: any violation is a toolkit defect.
    Established,
    /// A new claim under test: violations are findings.
    PaperNovel,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Established => "established",
            Status::PaperNovel => "paper-novel",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Kind {
    SandwichLower,
    SandwichUpper,
    PowerRefinement,
    CartesianLower,
    CartesianUpper,
    AluthgeChain,
    SquareRadiusMixed,
    Synchronous,
    PreGruss,
    PreGrussPower,
    Schwarz,
    Reid,
    Halmos,
    Kato,
    Kittaneh,
    FunctionGruss,
    PowerGruss,
    HalfPowerGruss,
    SquaredFunctionGruss,
    ExponentGruss,
    ModulusGruss,
    PowerModulusGruss,
    HalfModulusGruss,
    Key,
    SquareSum,
    SquareSelf,
    BinomialRadius,
    BinomialNorm,
    FirstOrder,
    FirstOrderLiteral,
    CommutingBinomial,
    PowerRadius,
    PowerRadiusAlpha,
    AlphaRadius,
    ModulusChain,
    PsdSumNorm,
    SquaredKittaneh,
}

#[derive(Debug, Clone, Serialize)]
pub struct Descriptor {
    pub id: &'static str,
    #[serde(skip)]
    pub kind: Kind,
    pub statement: &'static str,
    pub status: Status,
    pub shape: Shape,
    /// Number of unit vectors carried by the instance.
    pub states: usize,
    /// The instance matrices must be positive semidefinite.
    pub psd: bool,
    /// Scaling the instance scales both sides by the same power.
    pub homogeneous: bool,
    /// Admissible range of the exponent α, when the entry takes one.
    pub alpha: Option<(f64, f64)>,
    /// The entry takes a power `n`.
    pub order: bool,
    /// The entry takes an exponent `p > 0`.
    pub exponent: bool,
    /// Number of scalar functions the entry takes (`f`, then `g`).
    pub functions: usize,
    pub ensembles: &'static [Ensemble],
    pub note: Option<&'static str>,
}

impl Descriptor {
    /// Ensembles able to produce instances for this entry.
    pub fn admissible(&self) -> Vec<Ensemble> {
        match self.shape {
            Shape::PairCommuting => vec![Ensemble::Commuting],
            Shape::PairReid => vec![Ensemble::Reid],
            Shape::PairKittaneh => vec![Ensemble::Kittaneh],
            Shape::VectorTriple => vec![Ensemble::Ginibre],
            Shape::Single | Shape::Pair | Shape::OperatorState => {
                if self.psd {
                    vec![Ensemble::Psd]
                } else {
                    Ensemble::ALL.iter().copied().filter(Ensemble::is_single).collect()
                }
            }
        }
    }

    pub fn tolerance_factor(&self) -> f64 {
        match self.kind {
            Kind::Halmos | Kind::Kittaneh => SPECTRAL_VIOLATION_TOL,
            _ => VIOLATION_TOL,
        }
    }
}

/// Relative violation tolerance: `slack < −tol·max(1, |lhs|, |rhs|)`.
pub const VIOLATION_TOL: f64 = 1e-8;
/// Widened tolerance for entries that go through the spectral radius.
pub const SPECTRAL_VIOLATION_TOL: f64 = 1e-4;

const GENERAL: &[Ensemble] = &[
    Ensemble::Ginibre,
    Ensemble::Hermitian,
    Ensemble::Psd,
    Ensemble::Unitary,
    Ensemble::Contraction,
    Ensemble::JordanPerturbed,
];
const PAIRS: &[Ensemble] = &[
    Ensemble::Ginibre,
    Ensemble::Hermitian,
    Ensemble::Psd,
    Ensemble::Unitary,
    Ensemble::Contraction,
];
const PSD: &[Ensemble] = &[Ensemble::Psd];
const VECTORS: &[Ensemble] = &[Ensemble::Ginibre];

struct Entry {
    id: &'static str,
    kind: Kind,
    statement: &'static str,
    status: Status,
    shape: Shape,
}

impl Entry {
    const fn new(id: &'static str, kind: Kind, statement: &'static str, status: Status, shape: Shape) -> Self {
        Self {
            id,
            kind,
            statement,
            status,
            shape,
        }
    }
}

use Kind::*;
use Status::{Established, PaperNovel};

const ENTRIES: &[Entry] = &[
    Entry::new("I1.1L", SandwichLower, "½‖T‖ ≤ w(T)", Established, Shape::Single),
    Entry::new("I1.1R", SandwichUpper, "w(T) ≤ ‖T‖", Established, Shape::Single),
    Entry::new("I1.2", PowerRefinement, "w(T) ≤ ½(‖T‖ + ‖T²‖^{1/2})", Established, Shape::Single),
    Entry::new("I1.3L", CartesianLower, "¼‖A*A + AA*‖ ≤ w²(A)", Established, Shape::Single),
    Entry::new("I1.3R", CartesianUpper, "w²(A) ≤ ½‖A*A + AA*‖", Established, Shape::Single),
    Entry::new(
        "I1.4",
        AluthgeChain,
        "w(T) ≤ ½(‖T‖ + w(|T|^{1/2}U|T|^{1/2})) ≤ ½(‖T‖ + ‖T²‖^{1/2}), T = U|T|",
        Established,
        Shape::Single,
    ),
    Entry::new("I1.5", SquareRadiusMixed, "w²(T) ≤ ½(‖T‖ + w(T²))", PaperNovel, Shape::Single),
    Entry::new(
        "T1.1",
        Synchronous,
        "⟨f(A)g(A)x,x⟩ ≥ ⟨f(A)x,x⟩⟨g(A)x,x⟩ for f, g synchronous (≤ for asynchronous)",
        Established,
        Shape::OperatorState,
    ),
    Entry::new(
        "T2.1",
        PreGruss,
        "|C(f,g;A;x)| ≤ C(f,f;A;x)^{1/2} C(g,g;A;x)^{1/2}",
        Established,
        Shape::OperatorState,
    ),
    Entry::new(
        "C2.2α",
        PreGrussPower,
        "|⟨Ax,x⟩ − ⟨A^α x,x⟩⟨A^{1−α}x,x⟩| ≤ C(t^α,t^α;A;x)^{1/2} C(t^{1−α},t^{1−α};A;x)^{1/2}, α ∈ [0, ½]",
        Established,
        Shape::OperatorState,
    ),
    Entry::new("SCHWARZ", Schwarz, "|⟨Ax,y⟩|² ≤ ⟨Ax,x⟩⟨Ay,y⟩, A ≥ 0", Established, Shape::OperatorState),
    Entry::new("REID", Reid, "|⟨ABx,x⟩| ≤ ‖B‖⟨Ax,x⟩, A ≥ 0, AB = (AB)*", Established, Shape::PairReid),
    Entry::new("HALMOS", Halmos, "|⟨ABx,x⟩| ≤ r(B)⟨Ax,x⟩, A ≥ 0, AB = (AB)*", Established, Shape::PairReid),
    Entry::new(
        "KATO",
        Kato,
        "|⟨Ax,y⟩|² ≤ ⟨|A|^{2α}x,x⟩⟨|A*|^{2(1−α)}y,y⟩",
        Established,
        Shape::OperatorState,
    ),
    Entry::new(
        "KITT",
        Kittaneh,
        "|⟨ABx,y⟩| ≤ r(B)‖f(|A|)x‖‖g(|A*|)y‖, |A|B = B*|A|, f(t)g(t) = t",
        Established,
        Shape::PairKittaneh,
    ),
    Entry::new(
        "E4.2",
        FunctionGruss,
        "w(f(A)g(A)) − w_min(f(A))w_min(g(A)) ≤ [‖f(A)‖² − ℓ²(f^{1/2}(A))]^{1/2}[‖g(A)‖² − ℓ²(g^{1/2}(A))]^{1/2}",
        PaperNovel,
        Shape::Single,
    ),
    Entry::new(
        "E4.3",
        PowerGruss,
        "w(A) − w_min(A^α)w_min(A^{1−α}) ≤ [‖A^α‖² − ℓ²(A^{α/2})]^{1/2}[‖A^{1−α}‖² − ℓ²(A^{(1−α)/2})]^{1/2}",
        PaperNovel,
        Shape::Single,
    ),
    Entry::new("E4.4", HalfPowerGruss, "w(A) − w²_min(A^{1/2}) ≤ ‖A^{1/2}‖² − ℓ²(A^{1/4})", PaperNovel, Shape::Single),
    Entry::new(
        "E4.5",
        SquaredFunctionGruss,
        "w(f²(A)) − w²_min(f(A)) ≤ ‖f(A)‖² − ℓ²(f^{1/2}(A))",
        PaperNovel,
        Shape::Single,
    ),
    Entry::new("E4.6", ExponentGruss, "w(A^{2p}) − w²_min(A^p) ≤ ‖A^p‖² − ℓ²(A^{p/2})", PaperNovel, Shape::Single),
    Entry::new(
        "E4.7",
        ModulusGruss,
        "w(A) − w_min(f(A))w_min(g(A)) ≤ ½‖f²(|A|) + g²(|A*|)‖ − ℓ²(f^{1/2}(A))ℓ²(g^{1/2}(A)), f(t)g(t) = t",
        PaperNovel,
        Shape::Single,
    ),
    Entry::new(
        "E4.8",
        PowerModulusGruss,
        "w(A) − w_min(A^α)w_min(A^{1−α}) ≤ ½‖|A|^{2α} + |A*|^{2(1−α)}‖ − ℓ²(A^{α/2})ℓ²(A^{(1−α)/2})",
        PaperNovel,
        Shape::Single,
    ),
    Entry::new(
        "E4.9",
        HalfModulusGruss,
        "w(A) − w²_min(A^{1/2}) ≤ ½‖|A| + |A*|‖ − ℓ⁴(A^{1/4})",
        PaperNovel,
        Shape::Single,
    ),
    Entry::new(
        "KEY",
        Key,
        "|⟨x,e⟩⟨e,y⟩| ≤ ½(|⟨x,y⟩| + ‖x‖‖y‖), ‖e‖ = 1",
        Established,
        Shape::VectorTriple,
    ),
    Entry::new(
        "EQ2.11",
        SquareSum,
        "w((A+B)²) ≤ w(A²) + w(B²) + ¼min{w(BA²B) + ‖AB‖², w(AB²A) + ‖BA‖²}",
        PaperNovel,
        Shape::Pair,
    ),
    Entry::new("EQ2.14", SquareSelf, "w(A²) ≤ ⅛(w(A⁴) + ‖A²‖²)", PaperNovel, Shape::Single),
    Entry::new(
        "EQ2.18",
        BinomialRadius,
        "w((A+B)^n) ≤ ½ Σ_k C(n,k)‖f(|T_k|) + g(|T_k*|)‖, T_k = {(A + d_B)^k 1}B^{n−k}",
        PaperNovel,
        Shape::Pair,
    ),
    Entry::new(
        "NORM-REM",
        BinomialNorm,
        "‖(A+B)^n‖ ≤ ½ Σ_k C(n,k)‖f(|T_k|) + g(|T_k*|)‖",
        PaperNovel,
        Shape::Pair,
    ),
    Entry::new(
        "EQ2.19",
        FirstOrder,
        "w(A+B) ≤ ½‖f(|B|) + g(|B*|) + f(|T_1|) + g(|T_1*|)‖, T_1 = (A + d_B)1 = A",
        PaperNovel,
        Shape::Pair,
    ),
    Entry::new(
        "EQ2.19-literal",
        FirstOrderLiteral,
        "w(A+B) ≤ ½‖f(|B|) + g(|B*|) + f(|A + BA − AB|) + g(|(A + BA − AB)*|)‖",
        PaperNovel,
        Shape::Pair,
    ),
    Entry::new(
        "EQ2.20",
        CommutingBinomial,
        "w((A+B)^n) ≤ ½ Σ_k C(n,k)‖f(|A^k B^{n−k}|) + g(|(A^k B^{n−k})*|)‖, AB = BA",
        PaperNovel,
        Shape::PairCommuting,
    ),
    Entry::new(
        "EQ2.21",
        PowerRadius,
        "w(A^n) ≤ ½‖f(|A^n|) + g(|(A^n)*|)‖, f(t)g(t) = t",
        PaperNovel,
        Shape::Single,
    ),
    Entry::new(
        "EQ2.22",
        PowerRadiusAlpha,
        "w(A^n) ≤ ½‖|A^n|^α + |(A^n)*|^{1−α}‖",
        PaperNovel,
        Shape::Single,
    ),
    Entry::new("EQ2.23", AlphaRadius, "w(A) ≤ ½‖|A|^α + |A*|^{1−α}‖", PaperNovel, Shape::Single),
    Entry::new(
        "EQ2.24",
        ModulusChain,
        "w(A) ≤ ½‖|A| + 1‖ ≤ ¼(1 + ‖A‖ + √((‖A‖ − 1)² + 4‖A‖))",
        PaperNovel,
        Shape::Single,
    ),
    Entry::new(
        "FK3",
        PsdSumNorm,
        "‖A+B‖ ≤ ½(‖A‖ + ‖B‖ + √((‖A‖ − ‖B‖)² + 4‖A^{1/2}B^{1/2}‖²)), A, B ≥ 0",
        Established,
        Shape::Pair,
    ),
    Entry::new(
        "KITT-SQ",
        SquaredKittaneh,
        "w(A) ≤ ½‖f²(|A|) + g²(|A*|)‖, f(t)g(t) = t",
        Established,
        Shape::Single,
    ),
];

fn describe(e: &Entry) -> Descriptor {
    let mut d = Descriptor {
        id: e.id,
        kind: e.kind,
        statement: e.statement,
        status: e.status,
        shape: e.shape,
        states: 0,
        psd: false,
        homogeneous: false,
        alpha: None,
        order: false,
        exponent: false,
        functions: 0,
        ensembles: GENERAL,
        note: None,
    };
    match e.kind {
        SandwichLower | SandwichUpper | PowerRefinement | CartesianLower | CartesianUpper | AluthgeChain => {
            d.homogeneous = true;
        }
        SquareRadiusMixed => {
            d.note = Some("evaluated as stated; the two sides have different degrees");
        }
        Synchronous => {
            d.states = 1;
            d.psd = true;
            d.functions = 2;
            d.ensembles = PSD;
        }
        PreGruss => {
            d.states = 1;
            d.psd = true;
            d.functions = 2;
            d.ensembles = PSD;
        }
        PreGrussPower => {
            d.states = 1;
            d.psd = true;
            d.homogeneous = true;
            d.alpha = Some((0.0, 0.5));
            d.ensembles = PSD;
        }
        Schwarz => {
            d.states = 2;
            d.psd = true;
            d.homogeneous = true;
            d.ensembles = PSD;
        }
        Reid | Halmos => {
            d.states = 1;
            d.homogeneous = true;
            d.ensembles = &[Ensemble::Reid];
        }
        Kato => {
            d.states = 2;
            d.homogeneous = true;
            d.alpha = Some((0.0, 1.0));
        }
        Kittaneh => {
            d.states = 2;
            d.homogeneous = true;
            d.alpha = Some((0.0, 1.0));
            d.ensembles = &[Ensemble::Kittaneh];
            d.note = Some("violated for α ≠ ½ once |A| is far from scalar; A = diag(1, ε), B = A⁻¹[[0,1],[1,0]] is a witness");
        }
        FunctionGruss => {
            d.psd = true;
            d.functions = 2;
            d.ensembles = PSD;
        }
        SquaredFunctionGruss => {
            d.psd = true;
            d.functions = 1;
            d.ensembles = PSD;
        }
        PowerGruss | ModulusGruss | PowerModulusGruss => {
            d.psd = true;
            d.alpha = Some((0.0, 1.0));
            d.ensembles = PSD;
        }
        HalfPowerGruss | HalfModulusGruss => {
            d.psd = true;
            d.ensembles = PSD;
        }
        ExponentGruss => {
            d.psd = true;
            d.exponent = true;
            d.ensembles = PSD;
        }
        Key => {
            d.states = 1;
            d.homogeneous = true;
            d.ensembles = VECTORS;
        }
        SquareSum => d.ensembles = PAIRS,
        SquareSelf => {}
        BinomialRadius | BinomialNorm => {
            d.alpha = Some((0.0, 1.0));
            d.order = true;
            d.ensembles = PAIRS;
        }
        FirstOrder | FirstOrderLiteral => {
            d.alpha = Some((0.0, 1.0));
            d.ensembles = PAIRS;
            if e.kind == FirstOrderLiteral {
                d.note = Some("first-order term read as A + BA − AB instead of the recurrence value A");
            }
        }
        CommutingBinomial => {
            d.alpha = Some((0.0, 1.0));
            d.order = true;
            d.ensembles = &[Ensemble::Commuting];
        }
        PowerRadius | PowerRadiusAlpha => {
            d.alpha = Some((0.0, 1.0));
            d.order = true;
        }
        AlphaRadius => d.alpha = Some((0.0, 1.0)),
        ModulusChain => {}
        PsdSumNorm => {
            d.psd = true;
            d.homogeneous = true;
            d.ensembles = PSD;
        }
        SquaredKittaneh => {
            d.alpha = Some((0.0, 1.0));
            d.note = Some("mixed Schwarz bound followed by AM-GM; homogeneous only at α = ½");
        }
    }
    d
}

/// All entries, in registry order.
pub fn registry() -> &'static [Descriptor] {
    use std::sync::OnceLock;
    static REGISTRY: OnceLock<Vec<Descriptor>> = OnceLock::new();
    REGISTRY.get_or_init(|| ENTRIES.iter().map(describe).collect())
}

/// Look an entry up by id. `C2.2a` is accepted for `C2.2α`.
pub fn lookup(id: &str) -> Result<&'static Descriptor> {
    let id = if id == "C2.2a" { "C2.2α" } else { id };
    registry()
        .iter()
        .find(|d| d.id == id)
        .ok_or_else(|| Error::UnknownId(id.to_string()))
}

pub fn ids() -> impl Iterator<Item = &'static str> {
    registry().iter().map(|d| d.id)
}

pub fn established_ids() -> Vec<&'static str> {
    registry()
        .iter()
        .filter(|d| d.status == Status::Established)
        .map(|d| d.id)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_unique() {
        let mut ids: Vec<_> = ids().collect();
        let n = ids.len();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), n);
        assert_eq!(n, 37);
    }

    #[test]
    fn established_set() {
        assert_eq!(
            established_ids(),
            [
                "I1.1L", "I1.1R", "I1.2", "I1.3L", "I1.3R", "I1.4", "T1.1", "T2.1", "C2.2α", "SCHWARZ", "REID",
                "HALMOS", "KATO", "KITT", "KEY", "FK3", "KITT-SQ"
            ]
        );
    }

    #[test]
    fn alias_and_unknown() {
        assert_eq!(lookup("C2.2a").unwrap().id, "C2.2α");
        assert!(matches!(lookup("nope"), Err(Error::UnknownId(_))));
    }

    #[test]
    fn default_ensembles_are_admissible() {
        for d in registry() {
            let ok = d.admissible();
            assert!(d.ensembles.iter().all(|e| ok.contains(e)), "{}", d.id);
            if let Some((lo, hi)) = d.alpha {
                assert!(0.0 <= lo && lo < hi && hi <= 1.0);
            }
        }
    }
}
