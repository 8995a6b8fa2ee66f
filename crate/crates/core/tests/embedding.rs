//! Isometric embedding search and extension reports across the corpus.

mod common;

use ultrapath_core::embed::{check_extension_properties, find_isometric_embedding};
use ultrapath_core::fixtures;
use ultrapath_core::rat::Rat;

use common::corpus;

#[test]
fn every_host_embeds_into_itself() {
    for (name, space) in corpus() {
        let map = find_isometric_embedding(&space, &space)
            .unwrap_or_else(|| panic!("{name}: no self-embedding"));
        let pairs = map.pairs();
        assert_eq!(pairs.len(), space.len(), "{name}: partial self-embedding");
        for &(a, b) in pairs {
            for &(c, d) in pairs {
                assert_eq!(space.dist(a, c), space.dist(b, d), "{name}: bent pair");
            }
        }
    }
}

#[test]
fn alien_distances_block_embeddings() {
    // a 1/2-spaced pair cannot land in a host whose spectrum is integral
    let half_pair = fixtures::equilateral(2, Rat::new(1, 2));
    assert!(find_isometric_embedding(&half_pair, &fixtures::t3()).is_none());
    // and nothing embeds into something strictly smaller
    assert!(find_isometric_embedding(&fixtures::t3(), &half_pair).is_none());
}

#[test]
fn embeddings_compose_across_the_corpus() {
    // any host that receives t3 must realize both of its distances
    let t3 = fixtures::t3();
    for (name, space) in corpus() {
        if let Some(map) = find_isometric_embedding(&t3, &space) {
            let spec = space.spectrum();
            assert!(spec.contains(&Rat::int(1)) && spec.contains(&Rat::int(2)), "{name}");
            assert_eq!(map.pairs().len(), 3, "{name}");
        }
    }
}

#[test]
fn extension_reports_are_internally_consistent() {
    for (name, space) in corpus() {
        let report = check_extension_properties(&space);
        assert_eq!(
            report.spec_extension,
            report.spec_extension_witness.is_none(),
            "{name}: extension flag disagrees with its witness"
        );
        assert_eq!(
            report.up_directed,
            report.up_directed_witness.is_none(),
            "{name}: direction flag disagrees with its witness"
        );
        for entry in &report.son_embeds {
            assert!(entry.embeds_into <= entry.son_count, "{name}: impossible count");
            assert!(entry.embeds_into >= 1, "{name}: son misses even itself");
        }
    }
}

#[test]
fn homogeneous_hosts_extend_and_rigid_ones_do_not() {
    for name in ["pair", "eq3", "eq4_half", "ultv_012_w2", "ultv_013_w2"] {
        let space = corpus().into_iter().find(|(n, _)| *n == name).unwrap().1;
        let report = check_extension_properties(&space);
        assert!(report.spec_extension, "{name} should extend");
        assert!(report.up_directed, "{name} should be up-directed");
    }
    // a lone far point starves its partners of images
    let report = check_extension_properties(&fixtures::t3());
    assert!(report.up_directed);
    assert!(!report.spec_extension);
}
