use rand::Rng;

use super::Clearing;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClearEvent {
    ShoutPlaced,
    RoundEnd,
    DayEnd,
}

impl Clearing {
    /// Whether the market clears on `event`.
    ///
    /// Every policy clears at the end of a round and of a day; they differ
    /// only in what happens when a shout is placed. CP draws from `rng` only
    /// for an interior `p`, so CP(0) and CP(1) replay exactly like CR and CC.
    pub fn should_clear<R: Rng + ?Sized>(&self, event: ClearEvent, rng: &mut R) -> bool {
        match event {
            ClearEvent::RoundEnd | ClearEvent::DayEnd => true,
            ClearEvent::ShoutPlaced => match *self {
                Clearing::Continuous => true,
                Clearing::Round => false,
                Clearing::Probabilistic { p } if p <= 0.0 => false,
                Clearing::Probabilistic { p } if p >= 1.0 => true,
                Clearing::Probabilistic { p } => rng.gen::<f64>() < p,
            },
        }
    }
}
