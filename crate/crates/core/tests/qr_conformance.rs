use cbrn_core::qr::{
    all_masks, function_map, penalty, syndromes, valid_format_words, ECC_CODEWORDS,
    MAX_LABEL_BYTES, SIZE,
};
use cbrn_core::{encode_label, Error};
use proptest::prelude::*;

fn decode_payload(cw: &[u8]) -> Vec<u8> {
    let bit = |i: usize| (cw[i / 8] >> (7 - i % 8)) & 1;
    let field =
        |from: usize, len: usize| (from..from + len).fold(0usize, |a, i| a << 1 | bit(i) as usize);
    assert_eq!(field(0, 4), 0b0100);
    (0..field(4, 8))
        .map(|k| field(12 + 8 * k, 8) as u8)
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn every_mask_variant_is_a_valid_symbol(label in "[ -~]{1,53}") {
        let variants = all_masks(&label).unwrap();
        prop_assert_eq!(variants.len(), 8);
        let function = function_map(SIZE);
        let first = &variants[0];
        for (mask, m) in variants.iter().enumerate() {
            prop_assert_eq!(usize::from(m.mask()), mask);
            prop_assert!(valid_format_words().contains(&m.format_bits()));
            prop_assert_eq!(m.format_bits(), m.format_bits_secondary());
            let cw = m.extract_codewords();
            prop_assert!(syndromes(&cw, ECC_CODEWORDS).iter().all(|&s| s == 0));
            prop_assert_eq!(decode_payload(&cw), label.as_bytes().to_vec());
            // function patterns apart from the format areas do not depend on the mask
            for (i, &f) in function.iter().enumerate() {
                let (x, y) = (i % SIZE, i / SIZE);
                let format_area = x == 8 || y == 8;
                if f && !format_area {
                    prop_assert_eq!(m.get(x, y), first.get(x, y));
                }
            }
        }
    }

    #[test]
    fn chosen_mask_is_the_first_minimum(label in "[a-z0-9-]{1,53}") {
        let chosen = encode_label(&label).unwrap();
        let scores: Vec<u32> = all_masks(&label)
            .unwrap()
            .iter()
            .map(|m| penalty(m.modules(), m.size()))
            .collect();
        let best = *scores.iter().min().unwrap();
        prop_assert_eq!(usize::from(chosen.mask()), scores.iter().position(|&s| s == best).unwrap());
        prop_assert_eq!(encode_label(&label).unwrap(), chosen);
    }
}

#[test]
fn capacity_boundary() {
    assert!(encode_label(&"x".repeat(MAX_LABEL_BYTES)).is_ok());
    assert!(matches!(
        encode_label(&"x".repeat(MAX_LABEL_BYTES + 1)),
        Err(Error::LabelTooLong { len: 54, max: 53 })
    ));
    // multi-byte characters count by their UTF-8 length
    assert!(matches!(
        encode_label(&"é".repeat(27)),
        Err(Error::LabelTooLong { len: 54, .. })
    ));
    assert!(matches!(encode_label(""), Err(Error::EmptyLabel)));
}
