use std::fmt::Write as _;

/// A monomial stored as the sorted multiset of its variable indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    vars: Vec<usize>,
}

impl Monomial {
    pub fn new(mut vars: Vec<usize>) -> Self {
        vars.sort_unstable();
        Monomial { vars }
    }

    pub fn one() -> Self {
        Monomial { vars: Vec::new() }
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        let vars = exps
            .iter()
            .enumerate()
            .flat_map(|(v, &e)| std::iter::repeat_n(v, e as usize))
            .collect();
        Monomial { vars }
    }

    pub fn vars(&self) -> &[usize] {
        &self.vars
    }

    pub fn degree(&self) -> usize {
        self.vars.len()
    }

    pub fn max_var(&self) -> Option<usize> {
        self.vars.last().copied()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut vars = Vec::with_capacity(self.vars.len() + other.vars.len());
        let (mut i, mut j) = (0, 0);
        while i < self.vars.len() && j < other.vars.len() {
            if self.vars[i] <= other.vars[j] {
                vars.push(self.vars[i]);
                i += 1;
            } else {
                vars.push(other.vars[j]);
                j += 1;
            }
        }
        vars.extend_from_slice(&self.vars[i..]);
        vars.extend_from_slice(&other.vars[j..]);
        Monomial { vars }
    }

    /// Dense exponent vector of length `nvars`.
    pub fn exponents(&self, nvars: usize) -> Vec<u32> {
        let mut e = vec![0u32; nvars];
        for &v in &self.vars {
            e[v] += 1;
        }
        e
    }

    pub fn is_squarefree(&self) -> bool {
        self.vars.windows(2).all(|w| w[0] != w[1])
    }

    /// Render as a product of named variables, e.g. `t1t3t5`; `1` when empty.
    pub fn display_with(&self, name: impl Fn(usize) -> String) -> String {
        if self.vars.is_empty() {
            return "1".into();
        }
        let mut s = String::new();
        let mut i = 0;
        while i < self.vars.len() {
            let v = self.vars[i];
            let run = self.vars[i..].iter().take_while(|&&w| w == v).count();
            s.push_str(&name(v));
            if run > 1 {
                let _ = write!(s, "^{run}");
            }
            i += run;
        }
        s
    }
}
