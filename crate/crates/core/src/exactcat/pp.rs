//! Push-out products and sources of punctured cubes.

use super::{act_on_factors, pushout, tensor_dim, CatError, LinMap, PushoutData, Space};

/// `s(f_1 ⊙ ... ⊙ f_n)` with its canonical maps.
///
/// `kappas[i]` has source `V_1 ⊗ .. ⊗ U_i ⊗ .. ⊗ V_n` and
/// `odot ∘ kappas[i] = id ⊗ f_i ⊗ id`.
#[derive(Clone, Debug)]
pub struct PPSource {
    pub maps: Vec<LinMap>,
    pub object: Space,
    pub kappas: Vec<LinMap>,
    pub odot: LinMap,
}

impl PPSource {
    pub fn n(&self) -> usize {
        self.maps.len()
    }

    /// Factor dimensions of the domain of `kappas[i]`.
    pub fn corner_dims(&self, i: usize) -> Vec<usize> {
        self.maps
            .iter()
            .enumerate()
            .map(|(j, f)| if j == i { f.ncols() } else { f.rows() })
            .collect()
    }

    pub fn target_dims(&self) -> Vec<usize> {
        self.maps.iter().map(|f| f.rows()).collect()
    }
}

/// Builds the punctured-cube colimit as `((f_1 ⊙ f_2) ⊙ f_3) ⊙ ...`, each step a
/// binary push-out `s(F) ⊗ V_k  ∪_{s(F) ⊗ U_k}  (V_1⊗..⊗V_{k-1}) ⊗ U_k`.
pub fn pp_source(maps: &[LinMap]) -> PPSource {
    let n = maps.len();
    if n == 0 {
        return PPSource {
            maps: vec![],
            object: Space::zero(),
            kappas: vec![],
            odot: LinMap::zero(Space::zero(), Space::unit()),
        };
    }
    let f0 = &maps[0];
    let mut object = Space::new(f0.ncols());
    let mut kappas = vec![LinMap::identity(object.clone())];
    let mut odot = f0.clone();
    for (k, fk) in maps.iter().enumerate().skip(1) {
        let vprev = tensor_dim(&maps[..k].iter().map(|f| f.rows()).collect::<Vec<_>>());
        let s_dim = object.dim;
        // s(F) ⊗ U_k -> s(F) ⊗ V_k  and  s(F) ⊗ U_k -> V^{<k} ⊗ U_k.
        let left = LinMap::identity(Space::new(s_dim)).tensor(fk);
        let right = odot.tensor(&LinMap::identity(Space::new(fk.ncols())));
        let po: PushoutData = pushout(&left, &right).expect("pp_source legs share a source");
        let id_vk = LinMap::identity(Space::new(fk.rows()));
        let mut next = Vec::with_capacity(k + 1);
        for kap in &kappas {
            next.push(po.inj_left.after(&kap.tensor(&id_vk)));
        }
        next.push(po.inj_right.clone());
        let id_vprev = LinMap::identity(Space::new(vprev));
        odot = po
            .mediate(&odot.tensor(&id_vk), &id_vprev.tensor(fk))
            .expect("the push-out product cocone commutes");
        kappas = next;
        object = po.apex.clone();
    }
    PPSource {
        maps: maps.to_vec(),
        object,
        kappas,
        odot,
    }
}

/// `f ⊙ g : s(f ⊙ g) -> V ⊗ Y`.
pub fn pushout_product(f: &LinMap, g: &LinMap) -> LinMap {
    pp_source(&[f.clone(), g.clone()]).odot
}

/// The unique `g: s -> X` with `g ∘ κ_i = legs[i]`, after checking every
/// compatibility square `g_j ∘ (..f_i..) = g_i ∘ (..f_j..)`.
pub fn induced_from_cube(s: &PPSource, legs: &[LinMap]) -> Result<LinMap, CatError> {
    induced_from_cube_with(s, legs, 1)
}

/// As [`induced_from_cube`] for legs out of `corner_i ⊗ E` with `dim E = extra`,
/// producing a map out of `s ⊗ E`.
pub fn induced_from_cube_with(
    s: &PPSource,
    legs: &[LinMap],
    extra: usize,
) -> Result<LinMap, CatError> {
    let n = s.n();
    assert_eq!(legs.len(), n, "one leg per κ");
    if n == 0 {
        let tgt = Space::new(0);
        return Ok(LinMap::zero(tgt, Space::zero()));
    }
    let target = legs[0].target().clone();
    for (i, leg) in legs.iter().enumerate() {
        let want = tensor_dim(&s.corner_dims(i)) * extra;
        if leg.ncols() != want || leg.rows() != target.dim {
            return Err(CatError::DomainMismatch {
                expected: want,
                found: leg.ncols(),
            });
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            // Corner with U at both i and j, then E.
            let mut dims: Vec<usize> = s.target_dims();
            dims[i] = s.maps[i].ncols();
            dims[j] = s.maps[j].ncols();
            dims.push(extra);
            let to_j = act_on_factors(&dims, i, 1, &s.maps[i]);
            let to_i = act_on_factors(&dims, j, 1, &s.maps[j]);
            if legs[j].after(&to_j) != legs[i].after(&to_i) {
                return Err(CatError::IncompatibleLegs(i + 1, j + 1));
            }
        }
    }
    let id_e = LinMap::identity(Space::new(extra));
    let k: Vec<LinMap> = s.kappas.iter().map(|kap| kap.tensor(&id_e)).collect();
    let kk = LinMap::hstack(Space::new(s.object.dim * extra), &k);
    let gg = LinMap::hstack(target, legs);
    super::solve_left(&kk, &gg).map_err(|_| CatError::IncompatibleLegs(0, 0))
}

/// A push-out square `g' ∘ f = f' ∘ g` with `f: U -> V`, `g: U -> X`,
/// `f': X -> Y`, `g': V -> Y`.
#[derive(Clone, Debug)]
pub struct PushoutSquare {
    pub f: LinMap,
    pub g: LinMap,
    pub f_prime: LinMap,
    pub g_prime: LinMap,
}

impl PushoutSquare {
    pub fn of(f: &LinMap, g: &LinMap) -> Self {
        let po = pushout(g, f).expect("push-out legs share a source");
        PushoutSquare {
            f: f.clone(),
            g: g.clone(),
            f_prime: po.inj_left,
            g_prime: po.inj_right,
        }
    }
}

/// For push-out squares `q1`, `q2`, returns the comparison from the push-out of
/// `s(f_1 ⊙ f_2) -> V_1 ⊗ V_2` along the induced map to `s(f'_1 ⊙ f'_2)` into
/// `Y_1 ⊗ Y_2`; the square is a push-out exactly when this is an isomorphism.
pub fn odot_pushout_comparison(q1: &PushoutSquare, q2: &PushoutSquare) -> LinMap {
    let s = pp_source(&[q1.f.clone(), q2.f.clone()]);
    let s2 = pp_source(&[q1.f_prime.clone(), q2.f_prime.clone()]);
    let legs = [
        s2.kappas[0].after(&q1.g.tensor(&q2.g_prime)),
        s2.kappas[1].after(&q1.g_prime.tensor(&q2.g)),
    ];
    let down = induced_from_cube(&s, &legs).expect("the induced legs are compatible");
    let po = pushout(&s.odot, &down).expect("same source");
    po.mediate(&q1.g_prime.tensor(&q2.g_prime), &s2.odot)
        .expect("the comparison cocone commutes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_sources_give_zero_source() {
        let f = LinMap::zero(Space::zero(), Space::new(2));
        let g = LinMap::zero(Space::zero(), Space::new(3));
        let s = pp_source(&[f, g]);
        assert_eq!(s.object.dim, 0);
        assert_eq!(s.odot.rows(), 6);
    }

    #[test]
    fn identity_absorbs() {
        let id = LinMap::identity(Space::new(2));
        let g = LinMap::from_int_rows(1, 2, &[&[1], &[3]]);
        assert!(pushout_product(&id, &g).is_iso());
        assert!(pushout_product(&g, &id).is_iso());
    }

    #[test]
    fn kappa_identity_and_joint_epi() {
        let f = LinMap::from_int_rows(1, 2, &[&[1], &[2]]);
        let g = LinMap::from_int_rows(2, 2, &[&[1, 0], &[1, 0]]);
        let h = LinMap::from_int_rows(1, 1, &[&[0]]);
        let s = pp_source(&[f.clone(), g.clone(), h.clone()]);
        let maps = [f, g, h];
        for i in 0..3 {
            let dims = s.corner_dims(i);
            assert_eq!(
                s.odot.after(&s.kappas[i]),
                super::super::act_on_factors(&dims, i, 1, &maps[i])
            );
        }
        let joint = LinMap::hstack(s.object.clone(), &s.kappas);
        assert!(joint.is_surjective());
    }
}
