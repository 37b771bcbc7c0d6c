use rand::Rng;

use super::{OfferContext, Role};

/// Zero-intelligence with constraint: uniform random offers that never lose money.
#[derive(Debug, Clone, Copy, Default)]
pub struct Zic;

impl Zic {
    pub fn offer<R: Rng + ?Sized>(&self, role: Role, value: f64, ctx: &OfferContext<'_>, rng: &mut R) -> Option<f64> {
        let (lo, hi) = match role {
            Role::Buyer => (ctx.bounds.floor, value.min(ctx.bounds.ceiling)),
            Role::Seller => (value.max(ctx.bounds.floor), ctx.bounds.ceiling),
        };
        if hi < lo {
            return None;
        }
        if hi == lo {
            return Some(lo);
        }
        Some(rng.gen_range(lo..=hi))
    }
}
