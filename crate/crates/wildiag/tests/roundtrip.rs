use proptest::prelude::*;
use wildiag::dsl::{parse_formal, print_formal};
use wildiag::gen;
use wildiag::json::{export_json, parse_json};
use wildiag_core::{full_diagram, FormalData, MarkingStrategy};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn printed_data_parses_back(seed in any::<u64>()) {
        let m = gen::modified_data(&mut gen::rng(seed));
        let fd = FormalData(m.0.clone());
        let text = print_formal(&fd);
        prop_assert_eq!(parse_formal(&text).unwrap(), fd);
    }

    #[test]
    fn diagram_json_parses_back(seed in any::<u64>()) {
        let m = gen::modified_data(&mut gen::rng(seed));
        let d = full_diagram(&m, &MarkingStrategy::Default).unwrap();
        prop_assert_eq!(parse_json(&export_json(&d)).unwrap(), d);
    }
}
