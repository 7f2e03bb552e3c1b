use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::quotient::QuotientAlgebra;
use crate::scalar::Scalar;

/// A derivation of a quotient algebra, fixed by its values on the generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation<S> {
    images: Vec<Poly<S>>,
}

impl<S: Scalar> Derivation<S> {
    /// Images are normalized; well-definedness is not checked here, see
    /// [`Derivation::check_well_defined`].
    pub fn new(images: Vec<Poly<S>>, algebra: &QuotientAlgebra<S>) -> Self {
        assert_eq!(images.len(), algebra.nvars());
        Self { images: images.iter().map(|p| algebra.normal_form(p)).collect() }
    }

    /// Builds a derivation and rejects it unless it annihilates every relation.
    pub fn checked(images: Vec<Poly<S>>, algebra: &QuotientAlgebra<S>) -> Result<Self> {
        let d = Self::new(images, algebra);
        d.check_well_defined(algebra)?;
        Ok(d)
    }

    pub fn zero(algebra: &QuotientAlgebra<S>) -> Self {
        Self { images: vec![algebra.zero(); algebra.nvars()] }
    }

    /// `∂/∂x_k`.
    pub fn coordinate(algebra: &QuotientAlgebra<S>, k: usize) -> Self {
        let n = algebra.nvars();
        let images = (0..n)
            .map(|j| if j == k { Poly::one(n) } else { Poly::zero(n) })
            .collect();
        Self { images }
    }

    pub fn images(&self) -> &[Poly<S>] {
        &self.images
    }

    pub fn image(&self, k: usize) -> &Poly<S> {
        &self.images[k]
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(Poly::is_zero)
    }

    /// Leibniz extension applied to a representative; result in normal form.
    pub fn apply(&self, p: &Poly<S>, algebra: &QuotientAlgebra<S>) -> Poly<S> {
        algebra.normal_form(&self.apply_raw(p))
    }

    /// Chain-rule expansion without normalization.
    pub fn apply_raw(&self, p: &Poly<S>) -> Poly<S> {
        let mut out = Poly::zero(p.nvars());
        for (k, img) in self.images.iter().enumerate() {
            if img.is_zero() {
                continue;
            }
            let dp = p.partial(k);
            if !dp.is_zero() {
                out = &out + &(&dp * img);
            }
        }
        out
    }

    /// Fails with a structure error naming the first relation not annihilated.
    pub fn check_well_defined(&self, algebra: &QuotientAlgebra<S>) -> Result<()> {
        for rel in algebra.relations() {
            let v = self.apply(rel, algebra);
            if !v.is_zero() {
                return Err(Error::Structure(format!(
                    "derivation maps relation {} to {} != 0",
                    algebra.format(rel),
                    algebra.format(&v)
                )));
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { images: self.images.iter().zip(&other.images).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { images: self.images.iter().zip(&other.images).map(|(a, b)| a - b).collect() }
    }

    /// `a·D`.
    pub fn scale(&self, a: &Poly<S>, algebra: &QuotientAlgebra<S>) -> Self {
        Self { images: self.images.iter().map(|p| algebra.mul(a, p)).collect() }
    }

    pub fn scale_scalar(&self, c: &S) -> Self {
        Self { images: self.images.iter().map(|p| p.scale(c)).collect() }
    }

    /// `[D, E] = D∘E - E∘D`, evaluated on the generators.
    pub fn commutator(&self, other: &Self, algebra: &QuotientAlgebra<S>) -> Self {
        let images = (0..algebra.nvars())
            .map(|k| {
                let de = self.apply(other.image(k), algebra);
                let ed = other.apply(self.image(k), algebra);
                &de - &ed
            })
            .collect();
        Self { images }
    }

    pub fn format(&self, algebra: &QuotientAlgebra<S>) -> String {
        let parts: Vec<String> = algebra
            .vars()
            .iter()
            .zip(&self.images)
            .map(|(v, p)| format!("{v} ↦ {}", algebra.format(p)))
            .collect();
        format!("({})", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn derivative_of_cube() {
        let a = QuotientAlgebra::<Rational>::parse(&["x"], &[]).unwrap();
        let d = Derivation::coordinate(&a, 0);
        let p = a.parse_elem("x^3").unwrap();
        assert_eq!(a.format(&d.apply(&p, &a)), "3*x^2");
        assert!(d.apply(&a.parse_elem("7/3").unwrap(), &a).is_zero());
    }

    #[test]
    fn hamiltonian_of_x1_on_exotic_plane() {
        let a = QuotientAlgebra::<Rational>::parse(&["r", "x1", "x2"], &["x1^2+x2^2-r^2"]).unwrap();
        // {x1, -}: x1 -> 0, x2 -> 2r, r -> 2x2
        let images = vec![a.parse_elem("2*x2").unwrap(), a.zero(), a.parse_elem("2*r").unwrap()];
        let d = Derivation::checked(images, &a).unwrap();
        assert_eq!(a.format(&d.apply(&a.var(0), &a)), "2*x2");
    }

    #[test]
    fn ill_defined_on_quotient() {
        let a = QuotientAlgebra::<Rational>::parse(&["r", "x1", "x2"], &["x1^2+x2^2-r^2"]).unwrap();
        let d = Derivation::coordinate(&a, 1);
        assert!(matches!(d.check_well_defined(&a), Err(Error::Structure(_))));
    }
}
