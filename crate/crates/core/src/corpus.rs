//! The built-in golden corpus: the small algebras every suite exercises.

use crate::algebra::FiniteAlgebra;
use crate::construct;

/// Keys of the built-in corpus, in a fixed order.
pub const CORPUS_KEYS: [&str; 21] = [
    "2", "2p", "C4", "D4", "S2", "S3", "S4", "S5", "S6", "S7", "S3o2", "S3o3", "A2", "A3", "A5",
    "A2p", "A3p", "A4p", "refl2p", "S3C4", "RS3",
];

/// Looks up one corpus algebra by key.
pub fn corpus_algebra(key: &str) -> Option<FiniteAlgebra> {
    let a = match key {
        "2" | "2p" | "C4" | "D4" | "RS3" => construct::named_algebra(key)?,
        "S2" => construct::sugihara(2),
        "S3" => construct::sugihara(3),
        "S4" => construct::sugihara(4),
        "S5" => construct::sugihara(5),
        "S6" => construct::sugihara(6),
        "S7" => construct::sugihara(7),
        "S3o2" => construct::oplus(2),
        "S3o3" => construct::oplus(3),
        "A2" => construct::ap_family(2),
        "A3" => construct::ap_family(3),
        "A5" => construct::ap_family(5),
        "A2p" => construct::ap_plus(2),
        "A3p" => construct::ap_plus(3),
        "A4p" => construct::ap_plus(4),
        "refl2p" => construct::reflection(&construct::named_algebra("2p").unwrap())
            .expect("the two-element Brouwerian algebra reflects")
            .with_name("refl2p"),
        "S3C4" => construct::rigorous_extension(
            &construct::sugihara(3),
            &construct::named_algebra("C4").unwrap(),
        )
        .expect("C4 extends rigorously by S3")
        .with_name("S3C4"),
        _ => return None,
    };
    Some(a)
}

/// The whole corpus in key order.
pub fn golden_corpus() -> Vec<(&'static str, FiniteAlgebra)> {
    CORPUS_KEYS
        .iter()
        .map(|&k| (k, corpus_algebra(k).expect("corpus keys resolve")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_resolves_and_validates() {
        let corpus = golden_corpus();
        assert_eq!(corpus.len(), CORPUS_KEYS.len());
        for (key, a) in &corpus {
            // Round-trip through the document format re-validates.
            let raw = a.to_raw();
            let back = FiniteAlgebra::validate(raw.clone()).expect(key);
            assert_eq!(&back, a, "round trip for {key}");
        }
    }

    #[test]
    fn corpus_sizes() {
        let sizes: Vec<usize> = golden_corpus().iter().map(|(_, a)| a.size()).collect();
        assert_eq!(
            sizes,
            vec![2, 2, 4, 4, 2, 3, 4, 5, 6, 7, 4, 5, 5, 6, 8, 5, 6, 7, 6, 6, 3]
        );
    }
}
