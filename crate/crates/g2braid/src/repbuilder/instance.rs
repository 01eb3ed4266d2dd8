//! Instance data consumed by the builder: channel eigenvalues, exponents and
//! which blocks have a closed form.

use crate::g2weights::{casimir, channel_multiplicity, qdim, Weight};
use crate::pathlattice::{G2Lattice, Lattice, Partition, YoungLattice};
use crate::qscalar::QScalar;

/// A summand γ of V ⊗ V together with the eigenvalue of the braiding on it.
#[derive(Clone, Debug, PartialEq)]
pub struct Channel {
    pub name: String,
    pub eigenvalue: QScalar,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChannelData {
    pub channels: Vec<Channel>,
    /// Generators are `q^normalization` times a matrix A' satisfying the
    /// Hecke-type relation A' - A'^-1 = (q - q^-1) - m P.
    pub normalization: i64,
    /// Channel whose eigenprojection has rank one on every block where it
    /// occurs off the diagonal.
    pub rank_one: Option<usize>,
    /// Channel of the trivial object inside V ⊗ V, if any.
    pub trivial: Option<usize>,
}

impl ChannelData {
    pub fn eigenvalue(&self, c: usize) -> &QScalar {
        &self.channels[c].eigenvalue
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.channels.iter().position(|c| c.name == name)
    }
}

/// How a σ block W_2(δ, λ) is obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockForm {
    /// Closed form from the master equation with this rank-one channel.
    RankOne(usize),
    /// Closed form with P = 0 (at most two eigenvalues).
    NoRankOne,
    /// Completed by the constraint solver.
    Solver,
}

pub trait Instance: Lattice + Clone + 'static {
    fn channel_data(&self) -> ChannelData;

    /// Channels occurring on W_2(δ, λ), with multiplicities.
    fn block_channels(&self, d: &Self::Label, l: &Self::Label) -> Vec<(usize, u32)>;

    /// Exponent e(t) of the path δ -> μ -> λ in the master equation.
    fn exponent(&self, d: &Self::Label, m: &Self::Label, l: &Self::Label) -> i64;

    /// The Jucys–Murphy element σ_{k-1}⋯σ_1σ_1⋯σ_{k-1} acts on a path whose
    /// last step is `prev -> cur` by `q^jm_exponent(prev, cur)`.
    fn jm_exponent(&self, prev: &Self::Label, cur: &Self::Label) -> i64;

    /// Exponent of the scalar by which the full twist on n strands acts on
    /// paths ending at λ.
    fn central_exponent(&self, l: &Self::Label, n: usize) -> i64;

    fn block_form(&self, d: &Self::Label, l: &Self::Label) -> BlockForm;

    /// Diagonal entry of the trivial-channel eigenprojection of σ on the
    /// path λ -> μ -> λ.
    fn trivial_diag(&self, _m: &Self::Label, _l: &Self::Label) -> Option<QScalar> {
        None
    }

    /// Scalar γ with p σ p = γ p for the trivial-channel projector p of the
    /// neighbouring generator.
    fn trivial_gamma(&self) -> Option<QScalar> {
        None
    }
}

/// The G2 instance: paths in the tensor powers of the 7-dimensional module.
#[derive(Clone, Copy, Debug, Default)]
pub struct G2;

const G2_CHANNELS: [Weight; 4] = [
    Weight::new(0, 0),
    Weight::new(2, 0),
    Weight::new(1, 0),
    Weight::new(0, 1),
];

impl G2 {
    pub fn channel_weight(c: usize) -> Weight {
        G2_CHANNELS[c]
    }

    fn eigenvalues() -> [QScalar; 4] {
        [
            QScalar::q_pow(-12),
            QScalar::q_pow(2),
            -QScalar::q_pow(-6),
            -QScalar::one(),
        ]
    }
}

impl Lattice for G2 {
    type Label = Weight;
    fn name(&self) -> &'static str {
        G2Lattice.name()
    }
    fn origin(&self) -> Weight {
        G2Lattice.origin()
    }
    fn successors(&self, l: &Weight) -> Vec<Weight> {
        G2Lattice.successors(l)
    }
    fn label_to_json(&self, l: &Weight) -> serde_json::Value {
        G2Lattice.label_to_json(l)
    }
    fn label_from_json(&self, v: &serde_json::Value) -> Option<Weight> {
        G2Lattice.label_from_json(v)
    }
    fn parse_label(&self, s: &str) -> Result<Weight, String> {
        G2Lattice.parse_label(s)
    }
}

impl Instance for G2 {
    fn channel_data(&self) -> ChannelData {
        let ev = Self::eigenvalues();
        ChannelData {
            channels: G2_CHANNELS
                .iter()
                .zip(ev)
                .map(|(w, e)| Channel {
                    name: w.to_string(),
                    eigenvalue: e,
                })
                .collect(),
            normalization: 1,
            rank_one: Some(2),
            trivial: Some(0),
        }
    }

    fn block_channels(&self, d: &Weight, l: &Weight) -> Vec<(usize, u32)> {
        G2_CHANNELS
            .iter()
            .enumerate()
            .filter_map(|(i, g)| {
                let m = channel_multiplicity(*l, *d, *g);
                (m > 0).then_some((i, m))
            })
            .collect()
    }

    fn exponent(&self, d: &Weight, m: &Weight, l: &Weight) -> i64 {
        casimir(*m) - (casimir(*l) + casimir(*d)) / 2 + 1
    }

    fn jm_exponent(&self, prev: &Weight, cur: &Weight) -> i64 {
        casimir(*cur) - casimir(*prev) - casimir(Weight::V)
    }

    fn central_exponent(&self, l: &Weight, n: usize) -> i64 {
        casimir(*l) - casimir(Weight::V) * n as i64
    }

    fn block_form(&self, d: &Weight, l: &Weight) -> BlockForm {
        if d != l {
            if self.successors(d).contains(l) {
                BlockForm::RankOne(2)
            } else {
                BlockForm::NoRankOne
            }
        } else if d.a == 0 {
            BlockForm::RankOne(0)
        } else {
            BlockForm::Solver
        }
    }

    fn trivial_diag(&self, m: &Weight, l: &Weight) -> Option<QScalar> {
        Some(qdim(*m) / (qdim(Weight::V) * qdim(*l)))
    }

    fn trivial_gamma(&self) -> Option<QScalar> {
        let v = qdim(Weight::V);
        let mut acc = QScalar::zero();
        for (w, e) in G2_CHANNELS.iter().zip(Self::eigenvalues()) {
            acc = acc + e * qdim(*w);
        }
        Some(acc / (&v * &v))
    }
}

/// Young's lattice with the Hecke algebra channels {q, -q^-1}.
#[derive(Clone, Copy, Debug, Default)]
pub struct Young;

impl Young {
    /// Content of the box added along `from -> to`.
    fn added_content(from: &Partition, to: &Partition) -> i64 {
        let r = from.added_row(to).expect("not an edge of Young's lattice");
        to.content_of_last_box(r)
    }
}

impl Lattice for Young {
    type Label = Partition;
    fn name(&self) -> &'static str {
        YoungLattice.name()
    }
    fn origin(&self) -> Partition {
        YoungLattice.origin()
    }
    fn successors(&self, l: &Partition) -> Vec<Partition> {
        YoungLattice.successors(l)
    }
    fn label_to_json(&self, l: &Partition) -> serde_json::Value {
        YoungLattice.label_to_json(l)
    }
    fn label_from_json(&self, v: &serde_json::Value) -> Option<Partition> {
        YoungLattice.label_from_json(v)
    }
    fn parse_label(&self, s: &str) -> Result<Partition, String> {
        YoungLattice.parse_label(s)
    }
}

impl Instance for Young {
    fn channel_data(&self) -> ChannelData {
        ChannelData {
            channels: vec![
                Channel {
                    name: "row".into(),
                    eigenvalue: QScalar::q(),
                },
                Channel {
                    name: "column".into(),
                    eigenvalue: -QScalar::q_pow(-1),
                },
            ],
            normalization: 0,
            rank_one: None,
            trivial: None,
        }
    }

    fn block_channels(&self, d: &Partition, l: &Partition) -> Vec<(usize, u32)> {
        let mids: Vec<Partition> = self
            .successors(d)
            .into_iter()
            .filter(|m| self.successors(m).contains(l))
            .collect();
        match mids.len() {
            0 => Vec::new(),
            1 => {
                let c1 = Self::added_content(d, &mids[0]);
                let c2 = Self::added_content(&mids[0], l);
                if c2 == c1 + 1 {
                    vec![(0, 1)]
                } else {
                    vec![(1, 1)]
                }
            }
            _ => vec![(0, 1), (1, 1)],
        }
    }

    fn exponent(&self, d: &Partition, m: &Partition, l: &Partition) -> i64 {
        Self::added_content(d, m) - Self::added_content(m, l)
    }

    fn jm_exponent(&self, prev: &Partition, cur: &Partition) -> i64 {
        2 * Self::added_content(prev, cur)
    }

    fn central_exponent(&self, l: &Partition, _n: usize) -> i64 {
        let mut s = 0;
        for (r, &len) in l.0.iter().enumerate() {
            for c in 0..len as i64 {
                s += c - r as i64;
            }
        }
        2 * s
    }

    fn block_form(&self, _d: &Partition, _l: &Partition) -> BlockForm {
        BlockForm::NoRankOne
    }
}
