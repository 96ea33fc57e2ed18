//! Fixed subcomplexes, walls, and recognition of coset complexes.
//!
//! Recognition runs a fixed pipeline: the chamber count must factor as the
//! order of an admissible group of the right rank, the reduced homology must
//! be the bouquet predicted for that group, the vertex degree histogram must
//! match, and finally an explicit isomorphism must exist.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::Serialize;

use crate::complex::{
    find_isomorphism, milnor_fiber_complex, reduced_homology, ComplexAction, ComplexError, Homology, Isomorphism,
    TypedComplex, DEFAULT_SIMPLEX_CAP,
};
use crate::diagram::{basic_degrees, enumerate_admissible, has_forbidden_subdiagram, Diagram, Family};
use crate::group::{enumerate_cached, GroupTable, DEFAULT_CAP};

/// Faces `sigma` with `g sigma = sigma` as a set, for the vertex
/// permutation `perm` of `g`.
pub fn fixed_by_permutation(c: &TypedComplex, perm: &[u32]) -> TypedComplex {
    debug_assert!((0..perm.len() as u32).all(|v| c.vertex_type(v) == c.vertex_type(perm[v as usize])));
    // faces have distinct types, so a type-preserving map fixes a face
    // setwise only if it fixes it vertex by vertex
    let keep: Vec<bool> = perm.iter().enumerate().map(|(v, &w)| v as u32 == w).collect();
    if keep.iter().all(|&k| k) {
        return c.clone();
    }
    c.induced(&keep).0
}

/// Whether every setwise fixed face is fixed vertex by vertex.
pub fn setwise_fixed_is_pointwise(c: &TypedComplex, perm: &[u32]) -> bool {
    let mut img = Vec::new();
    for k in 0..=c.dim().max(0) as usize {
        for f in c.faces(k) {
            img.clear();
            img.extend(f.iter().map(|&v| perm[v as usize]));
            img.sort_unstable();
            if img.as_slice() == f && f.iter().any(|&v| perm[v as usize] != v) {
                return false;
            }
        }
    }
    true
}

/// `Delta^g`, including the empty face.
pub fn fixed_subcomplex(c: &TypedComplex, action: &impl ComplexAction, g: u32) -> TypedComplex {
    fixed_by_permutation(c, &action.vertex_permutation(g))
}

/// The wall of the reflection `r`.
pub fn wall(c: &TypedComplex, action: &impl ComplexAction, r: u32) -> TypedComplex {
    fixed_subcomplex(c, action, r)
}

/// `1 + dim Delta^g`; zero when only the empty face is fixed.
pub fn fixed_space_dim(c: &TypedComplex, action: &impl ComplexAction, g: u32) -> usize {
    (fixed_subcomplex(c, action, g).dim() + 1) as usize
}

/// Rank of the fixed space read off a fixed subcomplex.
pub fn fixed_rank(fixed: &TypedComplex) -> usize {
    (fixed.dim() + 1) as usize
}

/// `prod_i (delta_i - 1)^{n_i}` over the irreducible factors, where
/// `delta_i` is the smallest degree and `n_i` the rank of factor `i`.
pub fn bouquet_count(d: &Diagram) -> Result<u64, ComplexError> {
    let families = d.families()?;
    Ok(families
        .iter()
        .map(|f| (f.smallest_degree() - 1).pow(f.rank() as u32))
        .product())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "cause", rename_all = "snake_case")]
pub enum Elimination {
    BettiMismatch {
        expected_degree: isize,
        expected: u64,
    },
    DegreeProfileMismatch {
        complex: Vec<(usize, usize)>,
        candidate: Vec<(usize, usize)>,
    },
    NoIsomorphism,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CandidateRecord {
    pub diagram: String,
    /// `None` when the candidate matched.
    pub eliminated: Option<Elimination>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NotMfcReason {
    DimensionMismatch { dim: isize, expected: isize },
    NoAdmissibleFactorization { chambers: u64 },
    BettiMismatchForAll,
    IsomorphismFailedForAll,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Outcome {
    Recognized { diagram: String },
    NotMfc { reason: NotMfcReason },
}

#[derive(Clone, Debug, Serialize)]
pub struct RecognitionVerdict {
    #[serde(flatten)]
    pub outcome: Outcome,
    pub chambers: u64,
    pub homology: Option<Homology>,
    pub candidates: Vec<CandidateRecord>,
    /// Every candidate an isomorphism was found for, in candidate order.
    pub matches: Vec<String>,
    #[serde(skip)]
    pub certificate: Option<(Diagram, Isomorphism)>,
}

impl RecognitionVerdict {
    pub fn is_recognized(&self) -> bool {
        matches!(self.outcome, Outcome::Recognized { .. })
    }

    pub fn recognized(&self) -> Option<&str> {
        match &self.outcome {
            Outcome::Recognized { diagram } => Some(diagram),
            Outcome::NotMfc { .. } => None,
        }
    }

    /// Candidates still standing after the count and homology filters.
    pub fn betti_survivors(&self) -> Vec<&str> {
        self.candidates
            .iter()
            .filter(|c| !matches!(c.eliminated, Some(Elimination::BettiMismatch { .. })))
            .map(|c| c.diagram.as_str())
            .collect()
    }

    /// Rebuilds the recognized complex and checks the stored isomorphism.
    pub fn recheck(&self, s: &TypedComplex, recognizer: &Recognizer) -> Result<bool, ComplexError> {
        match &self.certificate {
            None => Ok(!self.is_recognized()),
            Some((d, iso)) => {
                let target = recognizer.candidate_complex(d)?;
                Ok(iso.verify(s, &target))
            }
        }
    }
}

/// Builds and caches candidate coset complexes for recognition.
pub struct Recognizer {
    pub cap: usize,
    pub simplex_cap: u64,
    pub cache_dir: Option<std::path::PathBuf>,
    complexes: Mutex<HashMap<Diagram, Arc<TypedComplex>>>,
}

impl Default for Recognizer {
    fn default() -> Self {
        Recognizer::new(DEFAULT_CAP, DEFAULT_SIMPLEX_CAP)
    }
}

impl Recognizer {
    pub fn new(cap: usize, simplex_cap: u64) -> Self {
        Recognizer {
            cap,
            simplex_cap,
            cache_dir: None,
            complexes: Mutex::new(HashMap::new()),
        }
    }

    pub fn candidate_complex(&self, d: &Diagram) -> Result<Arc<TypedComplex>, ComplexError> {
        if let Some(c) = self.complexes.lock().unwrap().get(d) {
            return Ok(c.clone());
        }
        let t = enumerate_cached(d, self.cap, self.cache_dir.as_deref())?;
        let (c, _) = milnor_fiber_complex(Arc::new(t), self.simplex_cap)?;
        let c = Arc::new(c);
        self.complexes.lock().unwrap().insert(d.clone(), c.clone());
        Ok(c)
    }

    /// Decides whether `s` is isomorphic to the coset complex of some
    /// admissible group of the given rank.
    pub fn recognize(&self, s: &TypedComplex, rank: usize) -> Result<RecognitionVerdict, ComplexError> {
        let expected_dim = rank as isize - 1;
        let chambers = s.count(expected_dim);
        let not = |reason, homology, candidates| RecognitionVerdict {
            outcome: Outcome::NotMfc { reason },
            chambers,
            homology,
            candidates,
            matches: Vec::new(),
            certificate: None,
        };
        if s.dim() != expected_dim {
            return Ok(not(
                NotMfcReason::DimensionMismatch {
                    dim: s.dim(),
                    expected: expected_dim,
                },
                None,
                Vec::new(),
            ));
        }
        let candidates = enumerate_admissible(rank, chambers);
        if candidates.is_empty() {
            return Ok(not(
                NotMfcReason::NoAdmissibleFactorization { chambers },
                None,
                Vec::new(),
            ));
        }
        let homology = reduced_homology(s);
        let hist = s.degree_histogram();
        let mut records = Vec::with_capacity(candidates.len());
        let mut matches = Vec::new();
        let mut certificate = None;
        let mut any_betti = false;
        for cand in &candidates {
            let name = cand.canonical_name().unwrap_or_else(|_| cand.to_symbol());
            let expected = bouquet_count(cand)?;
            if !homology.is_concentrated_in(expected_dim, expected) {
                records.push(CandidateRecord {
                    diagram: name,
                    eliminated: Some(Elimination::BettiMismatch {
                        expected_degree: expected_dim,
                        expected,
                    }),
                });
                continue;
            }
            any_betti = true;
            let target = self.candidate_complex(cand)?;
            let target_hist = target.degree_histogram();
            if target_hist != hist {
                records.push(CandidateRecord {
                    diagram: name,
                    eliminated: Some(Elimination::DegreeProfileMismatch {
                        complex: hist.clone(),
                        candidate: target_hist,
                    }),
                });
                continue;
            }
            match find_isomorphism(s, &target, false) {
                Some(iso) => {
                    if certificate.is_none() {
                        certificate = Some((cand.clone(), iso));
                    }
                    matches.push(name.clone());
                    records.push(CandidateRecord {
                        diagram: name,
                        eliminated: None,
                    });
                }
                None => records.push(CandidateRecord {
                    diagram: name,
                    eliminated: Some(Elimination::NoIsomorphism),
                }),
            }
        }
        let outcome = match matches.first() {
            Some(first) => Outcome::Recognized { diagram: first.clone() },
            None if !any_betti => Outcome::NotMfc {
                reason: NotMfcReason::BettiMismatchForAll,
            },
            None => Outcome::NotMfc {
                reason: NotMfcReason::IsomorphismFailedForAll,
            },
        };
        Ok(RecognitionVerdict {
            outcome,
            chambers,
            homology: Some(homology),
            candidates: records,
            matches,
            certificate,
        })
    }

    /// Looks for a family of top-dimensional type sets whose faces generate
    /// a coset complex of dimension `rank - 2` inside `wall`.
    pub fn milnor_wall_search(&self, wall: &TypedComplex, rank: usize) -> Result<WallSearch, ComplexError> {
        let mut attempts = Vec::new();
        for missing in type_families(rank) {
            let mut types: Vec<Vec<u16>> = missing
                .iter()
                .map(|&s| (0..rank as u16).filter(|&t| t != s).collect())
                .collect();
            types.sort();
            let top = rank.saturating_sub(2);
            let generators: Vec<Vec<u32>> = if rank >= 2 {
                wall.faces(top)
                    .filter(|f| types.contains(&wall.face_type(f)))
                    .map(|f| f.to_vec())
                    .collect()
            } else {
                Vec::new()
            };
            let sub = if generators.is_empty() {
                TypedComplex::empty_face_only(wall.type_labels().to_vec())
            } else {
                wall.generated(generators)
            };
            let full_family = missing.len() == rank;
            if sub.dim() != rank as isize - 2 {
                attempts.push(FamilyAttempt {
                    missing_types: missing,
                    dim: sub.dim(),
                    verdict: None,
                });
                continue;
            }
            let verdict = self.recognize(&sub, rank.saturating_sub(1))?;
            if verdict.is_recognized() {
                let certificate = MilnorWallCertificate {
                    missing_types: missing.clone(),
                    full_family,
                    recognized: verdict.recognized().unwrap().to_string(),
                    wall_is_generated: sub.f_vector() == wall.f_vector(),
                    isomorphism: verdict.certificate.clone().map(|c| c.1),
                };
                attempts.push(FamilyAttempt {
                    missing_types: missing,
                    dim: sub.dim(),
                    verdict: Some(verdict),
                });
                return Ok(WallSearch {
                    certificate: Some(certificate),
                    attempts,
                });
            }
            attempts.push(FamilyAttempt {
                missing_types: missing,
                dim: sub.dim(),
                verdict: Some(verdict),
            });
        }
        Ok(WallSearch {
            certificate: None,
            attempts,
        })
    }
}

/// Recognition with default caps.
pub fn recognize_milnor_fiber(s: &TypedComplex, rank: usize) -> Result<RecognitionVerdict, ComplexError> {
    Recognizer::default().recognize(s, rank)
}

/// Type families as sets of omitted types, larger families first and
/// lexicographic within a size.
pub fn type_families(rank: usize) -> Vec<Vec<u16>> {
    let mut out: Vec<Vec<u16>> = (0u32..1 << rank)
        .map(|mask| (0..rank as u16).filter(|&t| mask >> t & 1 == 1).collect())
        .collect();
    out.sort_by(|a: &Vec<u16>, b: &Vec<u16>| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct MilnorWallCertificate {
    /// The family consists of the type sets `R - {s}` for these `s`.
    pub missing_types: Vec<u16>,
    pub full_family: bool,
    pub recognized: String,
    /// The family generates the whole wall.
    pub wall_is_generated: bool,
    #[serde(skip)]
    pub isomorphism: Option<Isomorphism>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyAttempt {
    pub missing_types: Vec<u16>,
    pub dim: isize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<RecognitionVerdict>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WallSearch {
    pub certificate: Option<MilnorWallCertificate>,
    pub attempts: Vec<FamilyAttempt>,
}

/// One conjugacy class and the fixed subcomplex of its representative.
#[derive(Clone, Debug)]
pub struct ClassFixed {
    pub rep: u32,
    pub size: usize,
    pub fixed: TypedComplex,
}

#[derive(Clone, Debug, Serialize)]
pub struct CountRow {
    pub rep: u32,
    pub word: String,
    pub class_size: usize,
    pub is_reflection: bool,
    /// `1 + dim Delta^g`.
    pub p: usize,
    /// Number of `(p-1)`-faces of `Delta^g`.
    pub count: u64,
    /// `d_1 ... d_p`.
    pub expected: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CountCheck {
    pub rows: Vec<CountRow>,
    /// The chamber count equals the product of the degrees.
    pub chambers_ok: bool,
    /// Every wall has `d_1 ... d_{n-1}` top faces.
    pub walls_ok: bool,
    /// Counts agree for every class with `p = n - 2`.
    pub item_i: bool,
    /// Counts agree for every class.
    pub item_ii: bool,
}

impl CountCheck {
    /// First class with `p = n - 2` whose count disagrees.
    pub fn item_i_counterexample(&self, rank: usize) -> Option<&CountRow> {
        self.rows
            .iter()
            .find(|r| rank >= 2 && r.p == rank - 2 && r.count != r.expected)
    }
}

/// Compares `f_{p-1}(Delta^g)` with `d_1 ... d_p` over all conjugacy classes.
pub fn chamber_count_check(
    c: &TypedComplex,
    action: &(impl ComplexAction + Sync),
    t: &GroupTable,
    d: &Diagram,
) -> Result<CountCheck, ComplexError> {
    let degrees = basic_degrees(d)?;
    let n = d.rank();
    let reflections = t.reflections();
    let classes: Vec<(u32, usize)> = t.conjugacy_classes().iter().map(|c| (c[0], c.len())).collect();
    let fixed: Vec<ClassFixed> = classes
        .par_iter()
        .map(|&(rep, size)| ClassFixed {
            rep,
            size,
            fixed: fixed_subcomplex(c, action, rep),
        })
        .collect();
    let rows: Vec<CountRow> = fixed
        .iter()
        .map(|cf| {
            let p = fixed_rank(&cf.fixed);
            CountRow {
                rep: cf.rep,
                word: t.word_string(cf.rep),
                class_size: cf.size,
                is_reflection: reflections.binary_search(&cf.rep).is_ok(),
                p,
                count: cf.fixed.count(p as isize - 1),
                expected: degrees[..p].iter().product(),
            }
        })
        .collect();
    let chambers_ok = c.count(n as isize - 1) == degrees.iter().product::<u64>();
    let walls_ok = rows
        .iter()
        .filter(|r| r.is_reflection)
        .all(|r| n >= 1 && r.p == n - 1 && r.count == degrees[..n - 1].iter().product::<u64>());
    let item_i = rows
        .iter()
        .filter(|r| n >= 2 && r.p == n - 2)
        .all(|r| r.count == r.expected);
    let item_ii = rows.iter().all(|r| r.count == r.expected);
    Ok(CountCheck {
        rows,
        chambers_ok,
        walls_ok,
        item_i,
        item_ii,
    })
}

/// Whether the diagram avoids the subdiagrams that break the chamber counts.
pub fn counts_predicate(d: &Diagram) -> bool {
    !has_forbidden_subdiagram(d, &[Family::D(4), Family::F4, Family::H4])
}
