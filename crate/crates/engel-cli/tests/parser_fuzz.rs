//! Structured mutation tests for the definition parser: arbitrary edits of
//! valid input must never panic, and anything that still parses must
//! survive a render-reparse round trip.

use proptest::prelude::*;

const SEED: &str = "\
group C1 = cyclic 1
group C6 = cyclic 6
group S3 = perm 3 gens (1 2), (1 2 3)
group S4 = perm 4 gens (1 2), (1 2 3 4)
group D8 = dihedral 8
group M = modular p=3 n=2
group G = direct S3 C6
group F1 = semidirect C6 M action a->a, b->b*a^3
group EX = example primes=[3,5,7] exps=[2,3,4] N=3
";

fn mutate(mut text: Vec<u8>, edits: &[(usize, u8)], truncate_at: usize) -> String {
    for &(pos, byte) in edits {
        if text.is_empty() {
            break;
        }
        let idx = pos % text.len();
        text[idx] = byte;
    }
    if !text.is_empty() {
        text.truncate(truncate_at % (text.len() + 1));
    }
    String::from_utf8_lossy(&text).into_owned()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn parser_is_total_under_mutation(
        edits in proptest::collection::vec((any::<usize>(), any::<u8>()), 0..12),
        truncate_at in any::<usize>(),
    ) {
        let text = mutate(SEED.as_bytes().to_vec(), &edits, truncate_at);
        // must not panic; errors are fine
        let _ = engel_cli::parse_definitions(&text);
    }

    #[test]
    fn surviving_definitions_round_trip(
        edits in proptest::collection::vec((any::<usize>(), b' '..=b'z'), 0..6),
        truncate_at in any::<usize>(),
    ) {
        let text = mutate(SEED.as_bytes().to_vec(), &edits, truncate_at);
        if let Ok(defs) = engel_cli::parse_definitions(&text) {
            let rendered: String = defs.iter().map(|d| format!("{d}\n")).collect();
            let reparsed = engel_cli::parse_definitions(&rendered)
                .expect("rendered definitions must reparse");
            prop_assert_eq!(defs, reparsed);
        }
    }

    #[test]
    fn builder_is_total_on_parsed_input(
        edits in proptest::collection::vec((any::<usize>(), b' '..=b'z'), 0..6),
    ) {
        let text = mutate(SEED.as_bytes().to_vec(), &edits, usize::MAX);
        if let Ok(defs) = engel_cli::parse_definitions(&text) {
            // construction may fail, but never panic or run away
            let _ = engel_cli::build(&defs, Some(2_000));
        }
    }
}
