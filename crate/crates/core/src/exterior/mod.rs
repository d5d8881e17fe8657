//! Sparse exterior algebra over a fixed coframe and the differential induced by
//! structure equations.
//!
//! Sign convention: if `[e_i, e_j] = Σ_k γ^k_ij e_k` then
//! `de^k = -Σ_{i<j} γ^k_ij e^{ij}`, so `d² = 0` is exactly the Jacobi identity.

mod form;
mod frame;

pub use form::{blades_of_degree, sort_with_sign, Blade, Form};
pub use frame::{same_frame, Flavor, Frame, FrameRef};

use crate::error::{Error, Result};
use crate::scalars::Assignment;

/// The differential on degree-1 generators; extended to all forms as an anti-derivation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Differential {
    frame: FrameRef,
    images: Vec<Form>,
}

impl Differential {
    /// All generators closed.
    pub fn zero(frame: &FrameRef) -> Self {
        Differential { frame: frame.clone(), images: vec![Form::zero(frame, 2); frame.len()] }
    }

    /// `images[k] = d(generator k)`; every image must be a 2-form on `frame`.
    pub fn new(frame: &FrameRef, images: Vec<Form>) -> Result<Self> {
        if images.len() != frame.len() {
            return Err(Error::DimensionMismatch { expected: frame.len(), found: images.len() });
        }
        for f in &images {
            if !same_frame(f.frame(), frame) {
                return Err(Error::FrameMismatch);
            }
            if f.degree() != 2 {
                return Err(Error::DegreeMismatch(2, f.degree()));
            }
        }
        Ok(Differential { frame: frame.clone(), images })
    }

    /// Complex frame: takes `d ω^k` for the holomorphic generators and sets
    /// `d ω̄^k = conj(d ω^k)`.
    pub fn from_holomorphic(frame: &FrameRef, holo: Vec<Form>) -> Result<Self> {
        if !frame.is_complex() {
            return Err(Error::RealFrame);
        }
        if holo.len() != frame.rank() {
            return Err(Error::DimensionMismatch { expected: frame.rank(), found: holo.len() });
        }
        let mut images = holo.clone();
        for f in &holo {
            images.push(f.conj()?);
        }
        Differential::new(frame, images)
    }

    pub fn frame(&self) -> &FrameRef {
        &self.frame
    }

    pub fn image(&self, k: usize) -> &Form {
        &self.images[k]
    }

    pub fn images(&self) -> &[Form] {
        &self.images
    }

    pub fn specialize(&self, asg: &Assignment) -> Differential {
        Differential { frame: self.frame.clone(), images: self.images.iter().map(|f| f.specialize(asg)).collect() }
    }

    pub fn is_constant(&self) -> bool {
        self.images.iter().all(Form::is_constant)
    }

    /// The same equations on an equal frame (possibly a different allocation).
    pub fn reframe_to(&self, frame: &FrameRef) -> Result<Differential> {
        if !same_frame(&self.frame, frame) {
            return Err(Error::FrameMismatch);
        }
        Ok(Differential { frame: frame.clone(), images: self.images.iter().map(|f| f.reframe(frame)).collect() })
    }

    pub fn differentiate(&self, f: &Form) -> Result<Form> {
        if !same_frame(f.frame(), &self.frame) {
            return Err(Error::FrameMismatch);
        }
        let mut out = Form::zero(&self.frame, f.degree() + 1);
        for (blade, c) in f.terms() {
            let idx: Vec<usize> = blade.indices().collect();
            for (pos, &k) in idx.iter().enumerate() {
                let dk = &self.images[k];
                if dk.is_zero() {
                    continue;
                }
                let prefix = Blade::from_indices(&idx[..pos]).unwrap();
                let suffix = Blade::from_indices(&idx[pos + 1..]).unwrap();
                let sign = if pos % 2 == 0 { 1 } else { -1 };
                for (b2, c2) in dk.terms() {
                    let Some(s1) = prefix.wedge_sign(*b2) else { continue };
                    let mid = prefix.union(*b2);
                    let Some(s2) = mid.wedge_sign(suffix) else { continue };
                    let coeff = c * c2;
                    let total = sign * s1 * s2;
                    out.add_term(mid.union(suffix), if total < 0 { -coeff } else { coeff });
                }
            }
        }
        Ok(out)
    }

    /// `d(d(generator))` for every generator; all zero iff the Jacobi identity holds.
    pub fn d_squared_residual(&self) -> Vec<(usize, Form)> {
        self.images.iter().enumerate().map(|(k, f)| (k, self.differentiate(f).expect("same frame"))).collect()
    }

    pub fn satisfies_d_squared(&self) -> bool {
        self.d_squared_residual().iter().all(|(_, f)| f.is_zero())
    }

    /// Sum over bidegree components `f_{p,q}` of the `(p + dp, q + dq)` part of `d f_{p,q}`.
    fn typed_part(&self, f: &Form, dp: usize, dq: usize) -> Result<Form> {
        if !self.frame.is_complex() {
            return Err(Error::RealFrame);
        }
        let mut out = Form::zero(&self.frame, f.degree() + 1);
        for (p, q) in f.bidegrees()? {
            let comp = f.bidegree_project(p, q)?;
            let d = self.differentiate(&comp)?;
            out = out.try_add(&d.bidegree_project(p + dp, q + dq)?)?;
        }
        Ok(out)
    }

    pub fn del(&self, f: &Form) -> Result<Form> {
        self.typed_part(f, 1, 0)
    }

    pub fn delbar(&self, f: &Form) -> Result<Form> {
        self.typed_part(f, 0, 1)
    }

    /// True when no generator differential has a `(0,2)` component, i.e. `d = ∂ + ∂̄`.
    pub fn is_integrable_splitting(&self) -> Result<bool> {
        if !self.frame.is_complex() {
            return Err(Error::RealFrame);
        }
        for k in 0..self.frame.rank() {
            if !self.images[k].bidegree_project(0, 2)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Scalar;

    fn e(frame: &FrameRef, idx: &[usize]) -> Form {
        let z: Vec<usize> = idx.iter().map(|i| i - 1).collect();
        Form::from_indices(frame, &z, Scalar::one())
    }

    /// de4 = e13, de5 = e23, rest zero (a piece of the 8-dimensional family).
    fn small() -> Differential {
        let fr = Frame::real(5);
        let mut imgs = vec![Form::zero(&fr, 2); 5];
        imgs[3] = e(&fr, &[1, 3]);
        imgs[4] = e(&fr, &[2, 3]);
        Differential::new(&fr, imgs).unwrap()
    }

    #[test]
    fn differentiate_generator() {
        let d = small();
        let fr = d.frame().clone();
        assert_eq!(d.differentiate(&e(&fr, &[4])).unwrap(), e(&fr, &[1, 3]));
    }

    #[test]
    fn differentiate_product() {
        let d = small();
        let fr = d.frame().clone();
        // d(e45) = e135 - e4 ^ e23 = e135 - e234
        let expect = &e(&fr, &[1, 3, 5]) - &e(&fr, &[2, 3, 4]);
        assert_eq!(d.differentiate(&e(&fr, &[4, 5])).unwrap(), expect);
    }

    #[test]
    fn jacobi_failure_residual() {
        let fr = Frame::real(5);
        let mut imgs = vec![Form::zero(&fr, 2); 5];
        imgs[3] = e(&fr, &[1, 2]);
        imgs[4] = e(&fr, &[3, 4]);
        let d = Differential::new(&fr, imgs).unwrap();
        let res = d.d_squared_residual();
        assert_eq!(res[4].1, e(&fr, &[1, 2, 3]).neg());
        assert!(res[..4].iter().all(|(_, f)| f.is_zero()));
    }

    #[test]
    fn abelian_is_closed() {
        let d = Differential::zero(&Frame::real(6));
        assert!(d.satisfies_d_squared());
    }

    #[test]
    fn differential_requires_two_forms() {
        let fr = Frame::real(2);
        let bad = Differential::new(&fr, vec![e(&fr, &[1]), Form::zero(&fr, 2)]);
        assert_eq!(bad, Err(Error::DegreeMismatch(2, 1)));
    }

    #[test]
    fn del_on_real_frame_fails() {
        let d = small();
        assert_eq!(d.del(&e(d.frame(), &[1])), Err(Error::RealFrame));
    }
}
