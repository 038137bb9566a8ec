use crate::error::{Error, Result};
use crate::lattice::ModelSpec;

/// Update times of every species in integer ticks.
///
/// Species `s` updates at ticks `k * period_ticks[s]` for `k >= 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    period_ticks: Vec<u64>,
}

impl Schedule {
    pub fn for_model(model: &ModelSpec) -> Result<Self> {
        let scale = model.tick_scale()? as u64;
        let period_ticks =
            model.species.iter().map(|s| s.period.num() as u64 * (scale / s.period.den() as u64)).collect();
        Ok(Self { period_ticks })
    }

    pub fn period_ticks(&self) -> &[u64] {
        &self.period_ticks
    }

    /// Bitmask of species (by index) that update at `tick`.
    pub fn updating_mask(&self, tick: u64) -> u32 {
        if tick == 0 {
            return 0;
        }
        self.period_ticks.iter().enumerate().filter(|(_, &p)| tick.is_multiple_of(p)).fold(0, |m, (s, _)| m | (1 << s))
    }

    pub fn is_tie_tick(&self, tick: u64) -> bool {
        self.updating_mask(tick).count_ones() >= 2
    }

    /// First tick after `tick` at which a species in `active` updates.
    pub fn next_event_after(&self, tick: u64, active: u32) -> Result<Option<u64>> {
        let mut best: Option<u64> = None;
        for (s, &p) in self.period_ticks.iter().enumerate() {
            if active & (1 << s) == 0 {
                continue;
            }
            let next = (tick / p)
                .checked_add(1)
                .and_then(|k| k.checked_mul(p))
                .ok_or_else(|| Error::TickOverflow(format!("next update after tick {tick}")))?;
            best = Some(best.map_or(next, |b| b.min(next)));
        }
        Ok(best)
    }

    /// The merged event stream `(tick, updating mask)` for all species, in order.
    pub fn events(&self) -> impl Iterator<Item = (u64, u32)> + '_ {
        let all = (1u32 << self.period_ticks.len()) - 1;
        let mut t = 0u64;
        std::iter::from_fn(move || {
            let next = self.next_event_after(t, all).ok()??;
            t = next;
            Some((next, self.updating_mask(next)))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{blue_line, red_ball, Period, Topology};

    fn model(r: Period) -> ModelSpec {
        ModelSpec::new(4, 4, Topology::Torus)
            .with_species(blue_line(1).unwrap(), 0.1)
            .with_species(red_ball(1, r).unwrap(), 0.1)
    }

    #[test]
    fn two_thirds_period() {
        let s = Schedule::for_model(&model(Period::new(2, 3).unwrap())).unwrap();
        assert_eq!(s.period_ticks(), &[3, 2]);
        let ev: Vec<_> = s.events().take(5).collect();
        assert_eq!(ev, vec![(2, 0b10), (3, 0b01), (4, 0b10), (6, 0b11), (8, 0b10)]);
        assert!(s.is_tie_tick(6));
        assert!(!s.is_tie_tick(4));
    }

    #[test]
    fn equal_periods_always_tie() {
        let s = Schedule::for_model(&model(Period::ONE)).unwrap();
        assert!(s.events().take(10).all(|(_, m)| m == 0b11));
    }

    #[test]
    fn inactive_species_skipped() {
        let s = Schedule::for_model(&model(Period::new(3, 2).unwrap())).unwrap();
        // ticks: blue every 2, red every 3
        assert_eq!(s.next_event_after(0, 0b10).unwrap(), Some(3));
        assert_eq!(s.next_event_after(3, 0b11).unwrap(), Some(4));
        assert_eq!(s.next_event_after(3, 0).unwrap(), None);
        assert!(s.next_event_after(u64::MAX - 1, 0b01).is_err());
    }
}
