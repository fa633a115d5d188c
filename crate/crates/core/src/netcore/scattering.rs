use num_complex::Complex64;

/// Two-port S-parameters referenced to a real impedance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringMatrix {
    pub s11: Complex64,
    pub s12: Complex64,
    pub s21: Complex64,
    pub s22: Complex64,
    /// Reference impedance, ohm.
    pub zref: f64,
}

impl ScatteringMatrix {
    pub fn max_magnitude(&self) -> f64 {
        [self.s11, self.s12, self.s21, self.s22]
            .iter()
            .map(|s| s.norm())
            .fold(0.0, f64::max)
    }

    pub fn input_return_loss_db(&self) -> f64 {
        return_loss_db(self.s11)
    }

    /// `|s21|^2` in dB.
    pub fn insertion_gain_db(&self) -> f64 {
        20.0 * self.s21.norm().log10()
    }
}

/// Three-port S-parameters, `s[i][j]` with zero-based port indices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringMatrix3 {
    pub s: [[Complex64; 3]; 3],
    pub zref: f64,
}

impl ScatteringMatrix3 {
    /// One-based accessor matching the usual `S_ij` notation.
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.s[i - 1][j - 1]
    }

    /// Two-port between ports `p` and `q` (one-based) with the remaining
    /// port terminated in the reference impedance.
    pub fn reduce(&self, p: usize, q: usize) -> ScatteringMatrix {
        ScatteringMatrix {
            s11: self.get(p, p),
            s12: self.get(p, q),
            s21: self.get(q, p),
            s22: self.get(q, q),
            zref: self.zref,
        }
    }
}

/// `-20 log10 |gamma|`; infinite for a perfect match.
pub fn return_loss_db(gamma: Complex64) -> f64 {
    -20.0 * gamma.norm().log10()
}
