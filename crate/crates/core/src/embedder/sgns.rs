//! Negative-sampling objective for one (input, positive, negatives) example.
//!
//! The loss of an example is
//! `-log σ(u_pos · v) - Σ_n log σ(-u_n · v)`
//! where `v` is the input vector and `u_*` are output vectors.

use num_traits::Float;
use rand::Rng;

fn sigmoid<F: Float>(x: F) -> F {
    if x >= F::zero() {
        F::one() / (F::one() + (-x).exp())
    } else {
        let e = x.exp();
        e / (F::one() + e)
    }
}

/// `ln(1 + e^z)` without overflow.
fn softplus<F: Float>(z: F) -> F {
    z.max(F::zero()) + (-z.abs()).exp().ln_1p()
}

/// Loss of one scored target and its derivative with respect to the score.
///
/// For score `x = u · v`, the loss is `-log σ(x)` for the positive target and
/// `-log σ(-x)` for a negative one; the derivative is `σ(x) - label`.
pub fn score_term<F: Float>(score: F, positive: bool) -> (F, F) {
    let label = if positive { F::one() } else { F::zero() };
    let loss = if positive { softplus(-score) } else { softplus(score) };
    (loss, sigmoid(score) - label)
}

pub fn dot<F: Float>(a: &[F], b: &[F]) -> F {
    a.iter().zip(b).fold(F::zero(), |acc, (&x, &y)| acc + x * y)
}

pub fn pair_loss<F: Float>(input: &[F], positive: &[F], negatives: &[&[F]]) -> F {
    let mut loss = score_term(dot(input, positive), true).0;
    for n in negatives {
        loss = loss + score_term(dot(input, n), false).0;
    }
    loss
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairGradient<F> {
    pub input: Vec<F>,
    pub positive: Vec<F>,
    pub negatives: Vec<Vec<F>>,
}

/// Loss and analytic gradient of [`pair_loss`].
pub fn pair_gradient<F: Float>(input: &[F], positive: &[F], negatives: &[&[F]]) -> (F, PairGradient<F>) {
    let mut grad = PairGradient {
        input: vec![F::zero(); input.len()],
        positive: vec![F::zero(); input.len()],
        negatives: Vec::with_capacity(negatives.len()),
    };
    let targets = std::iter::once((positive, true)).chain(negatives.iter().map(|n| (*n, false)));
    let mut loss = F::zero();
    for (k, (target, is_positive)) in targets.enumerate() {
        let (l, coeff) = score_term(dot(input, target), is_positive);
        loss = loss + l;
        for (g, &t) in grad.input.iter_mut().zip(target) {
            *g = *g + coeff * t;
        }
        let target_grad: Vec<F> = input.iter().map(|&x| coeff * x).collect();
        if k == 0 {
            grad.positive = target_grad;
        } else {
            grad.negatives.push(target_grad);
        }
    }
    (loss, grad)
}

/// Noise distribution proportional to `count^0.75`.
#[derive(Debug, Clone)]
pub struct NoiseDistribution {
    cumulative: Vec<f64>,
}

impl NoiseDistribution {
    pub const POWER: f64 = 0.75;

    pub fn new(counts: &[u64]) -> Self {
        let mut acc = 0.0;
        let cumulative = counts
            .iter()
            .map(|&c| {
                acc += (c as f64).powf(Self::POWER);
                acc
            })
            .collect();
        NoiseDistribution { cumulative }
    }

    pub fn probabilities(&self) -> Vec<f64> {
        let total = self.cumulative.last().copied().unwrap_or(1.0);
        let mut prev = 0.0;
        self.cumulative
            .iter()
            .map(|&c| {
                let p = (c - prev) / total;
                prev = c;
                p
            })
            .collect()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        let total = *self.cumulative.last().expect("non-empty vocabulary");
        let u = rng.gen::<f64>() * total;
        self.cumulative.partition_point(|&c| c <= u).min(self.cumulative.len() - 1) as u32
    }
}
