/// Outcome of an exhaustive check, carrying the first counterexample found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict<W> {
    pub holds: bool,
    pub witness: Option<W>,
}

impl<W> Verdict<W> {
    pub fn pass() -> Self {
        Verdict {
            holds: true,
            witness: None,
        }
    }

    pub fn fail(witness: W) -> Self {
        Verdict {
            holds: false,
            witness: Some(witness),
        }
    }

    pub fn from_counterexample(counterexample: Option<W>) -> Self {
        match counterexample {
            None => Self::pass(),
            Some(w) => Self::fail(w),
        }
    }

    pub fn from_bool(holds: bool) -> Self {
        Verdict {
            holds,
            witness: None,
        }
    }

    pub fn map<V>(self, f: impl FnOnce(W) -> V) -> Verdict<V> {
        Verdict {
            holds: self.holds,
            witness: self.witness.map(f),
        }
    }
}
