//! Report builders behind the command line tool. Every report renders
//! deterministically so its text can be compared byte for byte.

use std::fmt;

use crate::arithmetic::{sketch_from_matrix, LinkingMatrix, PresentationSketch};
use crate::combinatorics::{
    certify_family_with_cut, choose_cut_pair, cut_bound, extended_cut_search, infer_split,
    is_combinatorially_free, CutFamily, CutPair, FreenessOptions, FreenessVerdict, MonomialFamily,
};
use crate::document::{PresentationDocument, Relation};
use crate::error::{Error, Result};
use crate::magnus::{iterated_commutator, Expansion, GroupWord};
use crate::poincare::{
    check_nonnegative, mild_poincare, theorem_main_series, DegreeSpec, IntSeries,
};
use crate::series::{Letter, Monomial};

/// Linking matrix, relation initial forms, and hats for a prime set.
#[derive(Clone, Debug)]
pub struct LinkingReport {
    pub sketch: PresentationSketch,
}

impl LinkingReport {
    pub fn new(matrix: LinkingMatrix) -> Result<Self> {
        Ok(LinkingReport {
            sketch: sketch_from_matrix(matrix)?,
        })
    }
}

impl fmt::Display for LinkingReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = &self.sketch;
        writeln!(f, "{}", s.matrix)?;
        writeln!(f, "relation initial forms:")?;
        for r in &s.relations {
            if r.zero_row {
                writeln!(
                    f,
                    "  rho{}: zero row (initial form has degree > 2)",
                    r.index
                )?;
            } else {
                writeln!(f, "  rho{}: {}", r.index, r.form)?;
            }
        }
        writeln!(f, "hats:")?;
        for (i, h) in s.hats.iter().enumerate() {
            match h {
                Some(m) => writeln!(f, "  rho{}: {m}", i + 1)?,
                None => writeln!(f, "  rho{}: undetermined", i + 1)?,
            }
        }
        let pairs: Vec<String> = s
            .unordered_pairs()
            .iter()
            .map(|p| match p {
                Some((a, b)) => format!("{{{a},{b}}}"),
                None => "?".to_string(),
            })
            .collect();
        writeln!(f, "unordered pairs: {{{}}}", pairs.join(","))
    }
}

/// Settings shared by the mildness and cut reports.
#[derive(Clone, Copy, Debug)]
pub struct CheckOptions {
    /// Truncation degree for expanding word relations.
    pub trunc: usize,
    /// Last Poincare coefficient to print.
    pub series_to: usize,
    pub freeness: FreenessOptions,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            trunc: crate::magnus::DEFAULT_TRUNCATION,
            series_to: 12,
            freeness: FreenessOptions::default(),
        }
    }
}

/// Highest terms of the relations of a document. Word relations go through
/// the Magnus expansion; explicit forms give their highest term directly.
pub fn document_hats(doc: &PresentationDocument, trunc: usize) -> Result<Vec<Monomial>> {
    let expansion = Expansion::new(doc.p, doc.d, trunc)?;
    doc.relations
        .iter()
        .enumerate()
        .map(|(k, r)| match r {
            Relation::Word(w) => expansion.word_hat(w),
            Relation::Form(s) => {
                if s.is_zero() {
                    Err(Error::Inconclusive {
                        truncation: s.truncation(),
                        message: format!(
                            "relation {} has a zero initial form below the truncation",
                            k + 1
                        ),
                    })
                } else {
                    s.highest_term()
                }
            }
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct MildnessReport {
    pub p: u64,
    pub d: usize,
    pub hats: Vec<Monomial>,
    pub verdict: FreenessVerdict,
    /// Present exactly when the verdict is free.
    pub series: Option<IntSeries>,
}

impl MildnessReport {
    pub fn build(doc: &PresentationDocument, opts: CheckOptions) -> Result<Self> {
        let hats = document_hats(doc, opts.trunc)?;
        Self::from_hats(doc.p, doc.d, hats, opts)
    }

    pub fn from_hats(p: u64, d: usize, hats: Vec<Monomial>, opts: CheckOptions) -> Result<Self> {
        let family = MonomialFamily::fixed_only(d, hats.clone())?;
        let verdict = is_combinatorially_free(&family, opts.freeness)?;
        let series = if verdict.is_free() {
            let spec = DegreeSpec::new(hats.iter().map(Monomial::degree).collect(), None)?;
            Some(mild_poincare(d, &spec, opts.series_to))
        } else {
            None
        };
        Ok(MildnessReport {
            p,
            d,
            hats,
            verdict,
            series,
        })
    }

    pub fn is_free(&self) -> bool {
        self.verdict.is_free()
    }
}

impl fmt::Display for MildnessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "presentation: p={}, d={}, relations={}",
            self.p,
            self.d,
            self.hats.len()
        )?;
        writeln!(f, "hats:")?;
        for (i, h) in self.hats.iter().enumerate() {
            writeln!(f, "  rho{}: {h} (degree {})", i + 1, h.degree())?;
        }
        writeln!(f, "verdict: {}", self.verdict)?;
        if let Some(s) = &self.series {
            writeln!(f, "cd(G) <= 2")?;
            writeln!(f, "dim H^2(G) = {}", self.hats.len())?;
            writeln!(f, "poincare series: {s}")?;
            write_nonnegative(f, s)?;
        }
        Ok(())
    }
}

fn write_nonnegative(f: &mut fmt::Formatter<'_>, s: &IntSeries) -> fmt::Result {
    match check_nonnegative(s) {
        None => writeln!(f, "nonnegative: yes"),
        Some(k) => writeln!(f, "nonnegative: no (first negative coefficient at t^{k})"),
    }
}

/// How the cut member was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CutSelection {
    Grid(CutPair),
    Manual(CutPair),
    /// The grid was exhausted; found by [`extended_cut_search`].
    Extended,
}

#[derive(Clone, Debug)]
pub struct CutRequest {
    pub split: Option<usize>,
    pub manual: Option<CutPair>,
    pub options: CheckOptions,
    /// Parametric words whose hats are verified by expansion, `n = 1..=k`.
    pub verify_words: usize,
}

impl Default for CutRequest {
    fn default() -> Self {
        CutRequest {
            split: None,
            manual: None,
            options: CheckOptions::default(),
            verify_words: 3,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CutReport {
    pub p: u64,
    pub d: usize,
    pub hats: Vec<Monomial>,
    /// `c` with its provenance, `None` for manual pairs.
    pub split: Option<(usize, bool)>,
    pub selection: CutSelection,
    pub cut: CutFamily,
    pub verdict: FreenessVerdict,
    /// `(n, word, hat)` for the checked instances.
    pub words: Vec<(usize, GroupWord, Monomial)>,
    /// Present exactly when the verdict is free.
    pub series: Option<IntSeries>,
}

impl CutReport {
    /// Requires free hats of degree 2. Returns a domain error when no cut
    /// member exists, and a report with a non-free verdict when a manual
    /// pair fails.
    pub fn build(p: u64, d: usize, hats: Vec<Monomial>, req: &CutRequest) -> Result<Self> {
        let mild = MildnessReport::from_hats(p, d, hats.clone(), req.options)?;
        if let FreenessVerdict::NotFree(w) = &mild.verdict {
            return Err(Error::domain(format!("relation hats are not free: {w}")));
        }
        let mut pairs: Vec<(Letter, Letter)> = Vec::new();
        for h in &hats {
            match h.letters() {
                &[t, s] if t > s => pairs.push((t, s)),
                _ => {
                    return Err(Error::usage(format!(
                        "hat {h} is not of the form X_t.X_s with t > s"
                    )))
                }
            }
        }

        let (split, selection, cut) = if let Some(pair) = req.manual {
            if !(1 < pair.i0 && pair.i0 < pair.j0 && pair.j0 as usize <= d) {
                return Err(Error::usage(format!(
                    "manual pair needs 1 < i0 < j0 <= {d}"
                )));
            }
            (None, CutSelection::Manual(pair), pair.family())
        } else {
            let (c, inferred) = match req.split {
                Some(c) => (c, false),
                None => (infer_split(&pairs)?, true),
            };
            match choose_cut_pair(&pairs, c, d) {
                Ok(pair) => (Some((c, inferred)), CutSelection::Grid(pair), pair.family()),
                Err(Error::Domain(msg)) => match extended_cut_search(&hats, d)? {
                    Some(cut) => (Some((c, inferred)), CutSelection::Extended, cut),
                    None => {
                        return Err(Error::domain(format!(
                            "{msg}; no member X_a.X_b^n.X_e with e < b < a <= {d} is free with the hats either"
                        )))
                    }
                },
                Err(e) => return Err(e),
            }
        };

        let verdict = certify_family_with_cut(&hats, cut, d)?;
        let mut words = Vec::new();
        let mut series = None;
        if verdict.is_free() {
            for n in 1..=req.verify_words {
                let w = iterated_commutator(cut.tail, cut.repeated, cut.lead, n);
                let hat = Expansion::new(p, d, n + 3)?.word_hat(&w)?;
                let expected = cut.member().instantiate(n);
                if hat != expected {
                    return Err(Error::domain(format!(
                        "word {w} has hat {hat}, expected {expected}"
                    )));
                }
                words.push((n, w, hat));
            }
            series = Some(theorem_main_series(d, hats.len(), req.options.series_to)?);
        }
        Ok(CutReport {
            p,
            d,
            hats,
            split,
            selection,
            cut,
            verdict,
            words,
            series,
        })
    }

    pub fn is_free(&self) -> bool {
        self.verdict.is_free()
    }
}

impl fmt::Display for CutReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let hats: Vec<String> = self.hats.iter().map(Monomial::to_string).collect();
        writeln!(
            f,
            "presentation: p={}, d={}, relations={}",
            self.p,
            self.d,
            self.hats.len()
        )?;
        writeln!(f, "hats: {}", hats.join(", "))?;
        if let Some((c, inferred)) = self.split {
            let how = if inferred { "inferred" } else { "given" };
            writeln!(
                f,
                "split: c = {c} ({how}); grid size (d - c)(c - 1) = {}",
                cut_bound(self.d, c)
            )?;
        }
        match self.selection {
            CutSelection::Grid(pair) => writeln!(f, "cut pair: {pair} (grid)")?,
            CutSelection::Manual(pair) => writeln!(f, "cut pair: {pair} (manual)")?,
            CutSelection::Extended => writeln!(
                f,
                "cut pair: grid exhausted; extended search over X_a.X_b^n.X_e, e < b < a"
            )?,
        }
        writeln!(f, "cut member: {} (n >= 1)", self.cut)?;
        writeln!(f, "verdict: {}", self.verdict)?;
        if let Some(s) = &self.series {
            let c = &self.cut;
            writeln!(
                f,
                "parametric words x_n = f_x{} o f_x{}^n (x{}), f_x(y) = [x,y]:",
                c.tail, c.repeated, c.lead
            )?;
            for (n, w, hat) in &self.words {
                writeln!(f, "  n={n}: {w} hat {hat} (expanded)")?;
            }
            writeln!(f, "  n>=1: hat {}", c.member())?;
            writeln!(f, "cd(G) <= 2")?;
            writeln!(
                f,
                "dim H^2(G) infinite ({} relations of degree 2, one of each degree >= 3)",
                self.hats.len()
            )?;
            writeln!(f, "poincare series: {s}")?;
            write_nonnegative(f, s)?;
            writeln!(
                f,
                "split set: the words x_n stand for Frobenius elements; arithmetic realization not verified (out of scope)"
            )?;
        }
        Ok(())
    }
}

/// Printed by the `poincare` command.
#[derive(Clone, Debug)]
pub struct SeriesReport {
    pub series: IntSeries,
}

impl SeriesReport {
    pub fn new(d: usize, spec: &DegreeSpec, upto: usize) -> Self {
        SeriesReport {
            series: mild_poincare(d, spec, upto),
        }
    }
}

impl fmt::Display for SeriesReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.series)?;
        write_nonnegative(f, &self.series)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arithmetic::linking_matrix;
    use crate::document::RelationStyle;

    const PRIMES: [u64; 5] = [31, 19, 13, 337, 7];

    fn hats(pairs: &[(Letter, Letter)]) -> Vec<Monomial> {
        pairs
            .iter()
            .map(|&(t, s)| Monomial::new([t, s]).unwrap())
            .collect()
    }

    #[test]
    fn example_mildness() {
        let m = linking_matrix(3, &PRIMES).unwrap();
        let doc = PresentationDocument::from_linking(&m, RelationStyle::Forms).unwrap();
        let report = MildnessReport::build(&doc, CheckOptions::default()).unwrap();
        assert!(report.is_free());
        let text = report.to_string();
        assert!(text.contains("dim H^2(G) = 5"));
        assert!(text.contains("poincare series: 1, 5, 20, 75, 275,"));
    }

    #[test]
    fn words_and_forms_agree() {
        let m = linking_matrix(3, &PRIMES).unwrap();
        let words = PresentationDocument::from_linking(&m, RelationStyle::Words).unwrap();
        let forms = PresentationDocument::from_linking(&m, RelationStyle::Forms).unwrap();
        let a = MildnessReport::build(&words, CheckOptions::default()).unwrap();
        let b = MildnessReport::build(&forms, CheckOptions::default()).unwrap();
        assert_eq!(a.to_string(), b.to_string());
    }

    #[test]
    fn overlapping_relations_are_not_mild() {
        let r = MildnessReport::from_hats(3, 2, hats(&[(1, 2), (2, 1)]), CheckOptions::default())
            .unwrap();
        assert!(!r.is_free());
        assert!(r.series.is_none());
        assert!(r.to_string().contains("overlap"));
    }

    #[test]
    fn empty_presentation_is_free() {
        let r = MildnessReport::from_hats(3, 3, vec![], CheckOptions::default()).unwrap();
        let s = r.series.unwrap();
        assert_eq!(s.coefficient(4), 81.into());
    }

    #[test]
    fn example_cut_uses_extended_search() {
        let h = hats(&[(5, 1), (5, 2), (4, 3), (4, 2), (5, 3)]);
        let r = CutReport::build(3, 5, h, &CutRequest::default()).unwrap();
        assert_eq!(r.selection, CutSelection::Extended);
        assert_eq!(r.cut.to_string(), "X5.X4^n.X1");
        assert!(r.is_free());
        assert_eq!(
            r.series.as_ref().unwrap(),
            &theorem_main_series(5, 5, 12).unwrap()
        );
        assert_eq!(r.words.len(), 3);
        assert!(r.to_string().contains("not verified"));
    }

    #[test]
    fn manual_pair_inside_hats_fails() {
        let h = hats(&[(5, 1), (5, 2), (4, 3), (4, 2), (5, 3)]);
        let req = CutRequest {
            manual: Some(CutPair { i0: 3, j0: 5 }),
            ..Default::default()
        };
        let r = CutReport::build(3, 5, h, &req).unwrap();
        assert!(!r.is_free());
        assert!(r.series.is_none());
    }

    #[test]
    fn grid_cut() {
        let h = hats(&[(3, 1)]);
        let r = CutReport::build(3, 3, h, &CutRequest::default()).unwrap_err();
        // c = 1 is below the smallest admissible split
        assert_eq!(r.exit_code(), 2);
        let h = hats(&[(4, 1), (3, 2)]);
        let r = CutReport::build(3, 4, h, &CutRequest::default()).unwrap();
        assert_eq!(r.selection, CutSelection::Grid(CutPair { i0: 2, j0: 4 }));
    }
}
