use mostar::braces::{classify, strip_pendants};
use mostar::families::{verify_family, FamilyId, FamilyRegistry, Provenance};
use mostar::harness::atlas;
use mostar::{edge_mostar, is_isomorphic};

#[test]
fn bundled_entries_follow_their_closed_forms() {
    let reg = FamilyRegistry::bundled();
    for spec in reg.specs().filter(|s| s.poly.is_some()) {
        let span = match spec.provenance {
            Provenance::Discovered => 15,
            _ => 30,
        };
        let check = verify_family(&reg, spec.id, spec.m_min..=spec.m_min + span).unwrap();
        assert!(check.passed(), "{}: {:?}", spec.id, check.mismatches().collect::<Vec<_>>());
    }
}

#[test]
fn members_strip_back_to_the_base() {
    let reg = FamilyRegistry::bundled();
    for spec in reg.specs().filter(|s| s.id.cycles() == 3) {
        let base = spec.base().unwrap();
        let base_brace = strip_pendants(&base).unwrap().brace;
        for k in [0, 1, 5] {
            let g = reg.build(spec.id, spec.m_min + k).unwrap();
            let d = strip_pendants(&g).unwrap();
            assert_eq!(d.pendant_count, strip_pendants(&base).unwrap().pendant_count + k);
            assert!(is_isomorphic(&d.brace, &base_brace), "{}", spec.id);
        }
    }
}

#[test]
fn same_closed_form_families_differ_in_brace() {
    let reg = FamilyRegistry::bundled();
    let class = |id| classify(&reg.build(id, 12).unwrap()).unwrap();
    assert_ne!(class(FamilyId::A3), class(FamilyId::A4));
    assert_ne!(class(FamilyId::F1), class(FamilyId::H1));
    assert_eq!(class(FamilyId::H1).to_string(), "ALPHA_3(1,2,2,2)");
}

#[test]
fn bundled_registry_matches_a_fresh_discovery() {
    let (fresh, report) = atlas(2).unwrap();
    let bundled = FamilyRegistry::bundled();
    assert_eq!(fresh.to_json().unwrap(), bundled.to_json().unwrap());
    assert_eq!(report.discovery.unresolved, vec![FamilyId::H4]);
    assert!(report.pinning.iter().all(|c| c.passed()));
    let a2 = bundled.get(FamilyId::A2).unwrap();
    assert!(a2.m_min <= 10);
    assert_eq!(report.discovery.composite_matches_at_9, 5);
}

#[test]
fn unique_maximizer_examples() {
    let reg = FamilyRegistry::bundled();
    assert_eq!(edge_mostar(&reg.build(FamilyId::A0, 12).unwrap()).unwrap(), 96);
    assert_eq!(edge_mostar(&reg.build(FamilyId::A2, 10).unwrap()).unwrap(), 53);
    assert_eq!(edge_mostar(&reg.build(FamilyId::B0, 10).unwrap()).unwrap(), 66);
}
