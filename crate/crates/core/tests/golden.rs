mod common;

use common::*;
use eladapt::adaptation::{adapt, adapt_report, default_k, AdaptationSetting};
use eladapt::reasoner::{entails_abox, is_consistent, kb_equivalent, Reasoner};
use eladapt::repair::{find_justifications, find_repairs};
use eladapt::revision::{b_mw, rolling, BmwOptions};
use eladapt::syntax::{depth, parse_assertion, parse_kb, print_kb, signature, Abox, KnowledgeBase, Name};

fn data(name: &str) -> String {
    std::fs::read_to_string(format!("{}/testdata/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn worked_setting() -> AdaptationSetting {
    AdaptationSetting::new(kb(&data("t1.kb")).tbox, kb(&data("a1.kb")).abox, kb(&data("n1.kb")).abox)
}

fn cancer_setting() -> AdaptationSetting {
    AdaptationSetting::new(kb(&data("cancer_t.kb")).tbox, kb(&data("cancer_a.kb")).abox, kb(&data("cancer_n.kb")).abox)
}

const AG: &str = "assert A(a).\nassert C(a).\nassert R(a, ?x1).\nassert A(?x1).\nassert C(?x1).\nassert R(?x1, ?x2).\nassert A(?x2).\nassert C(?x2).\n";

#[test]
fn worked_example_graph_and_justifications() {
    let s = worked_setting();
    let a_g = b_mw(&KnowledgeBase::new(s.tbox.clone(), s.solution_abox.clone()), 1).unwrap().to_abox();
    assert_eq!(a_g, abox(AG));
    assert_eq!(signature(&a_g).node_names, [Name::new("a")].into_iter().collect());
    let js = find_justifications(&s.tbox, &a_g, &s.target_abox).unwrap();
    assert_eq!(js, [abox("assert A(a)."), abox("assert R(a, ?x1).\nassert A(?x1).")].into_iter().collect());
    let rs = find_repairs(&s.tbox, &a_g, &s.target_abox).unwrap().repairs;
    assert_eq!(
        rs,
        [abox("assert A(a).\nassert A(?x1)."), abox("assert A(a).\nassert R(a, ?x1).")].into_iter().collect()
    );
}

#[test]
fn worked_example_rolling() {
    let t = kb(T1).tbox;
    let a1: Abox = abox(AG).difference(&abox("assert A(a).\nassert A(?x1).")).cloned().collect();
    let a2: Abox = abox(AG).difference(&abox("assert A(a).\nassert R(a, ?x1).")).cloned().collect();
    assert_eq!(rolling(&a1, &t).unwrap(), abox("assert C(a).\nassert (some R. (C and (some R. A)))(a)."));
    assert_eq!(rolling(&a2, &t).unwrap(), abox("assert C(a)."));
}

#[test]
fn worked_example_outcomes() {
    let s = worked_setting();
    assert_eq!(default_k(&s), 1);
    let out = adapt(&s, 1).unwrap();
    assert_eq!(out.len(), 2);
    assert_eq!(out[0].solution, abox("assert E(a).\nassert C(a).\nassert (some R. (C and (some R. A)))(a)."));
    assert!(equal_up_to_substitution(&out[0].removed, &abox("assert A(a).\nassert A(?x1).")));
    assert_eq!(out[1].solution, abox("assert E(a).\nassert C(a)."));
    assert!(equal_up_to_substitution(&out[1].removed, &abox("assert A(a).\nassert R(a, ?x1).")));
}

#[test]
fn worked_example_json_is_stable() {
    let report = adapt_report(&worked_setting(), 1, BmwOptions::default()).unwrap();
    let text = serde_json::to_string(&eladapt::cli::adapt_json(&report, usize::MAX)).unwrap();
    assert_eq!(format!("{text}\n"), data("t1_k1.golden.json"));
    let report = adapt_report(&cancer_setting(), 2, BmwOptions::default()).unwrap();
    let text = serde_json::to_string(&eladapt::cli::adapt_json(&report, usize::MAX)).unwrap();
    assert_eq!(format!("{text}\n"), data("cancer_k2.golden.json"));
}

#[test]
fn cancer_example() {
    let s = cancer_setting();
    assert_eq!(depth(&s.tbox), 2);
    assert_eq!(default_k(&s), 2);
    let whole = KnowledgeBase::new(s.tbox.clone(), s.solution_abox.union(&s.target_abox).cloned().collect());
    assert!(!is_consistent(&whole));
    let out = adapt(&s, 2).unwrap();
    assert_eq!(out.len(), 2);
    assert_eq!(out[0].removed, abox("assert Tamoxifen(y)."));
    let r = Reasoner::new(&s.tbox);
    for q in [
        "(some hasGene. CYP2D6)(Mary)",
        "Symp(Mary)",
        "(some TreatBy. (Anti-oestrogen and (some metabolizedTo. (Compounds and (some bindto. OestrogenReceptor)))))(Mary)",
    ] {
        assert!(r.entails(&out[0].solution, &parse_assertion(q).unwrap()), "{q}");
    }
    assert!(entails_abox(&KnowledgeBase::new(s.tbox.clone(), out[0].solution.clone()), &s.target_abox));
    assert!(out[1].removed_has_role_assertion());
}

#[test]
fn cancer_graph_rolls_to_the_treatment_concept() {
    let s = cancer_setting();
    let g = b_mw(&KnowledgeBase::new(s.tbox.clone(), s.solution_abox.clone()), 2).unwrap();
    let rolled = rolling(&g.to_abox(), &s.tbox).unwrap();
    let q = parse_assertion("(some TreatBy. (Anti-oestrogen and (some metabolizedTo. (Compounds and (some bindto. OestrogenReceptor)))))(Mary)").unwrap();
    assert!(Reasoner::new(&s.tbox).entails(&rolled, &q));
}

#[test]
fn equivalent_solutions_from_the_examples() {
    let t = kb(T1).tbox;
    let a1 = KnowledgeBase::new(t.clone(), abox("assert A(a)."));
    let a2 = KnowledgeBase::new(t.clone(), abox("assert A(a).\nassert C(a).\nassert (some R. C)(a)."));
    assert_eq!(kb_equivalent(&a1, &a2), Ok(true));
    let n = abox("assert E(a).");
    let o1 = adapt(&AdaptationSetting::new(t.clone(), a1.abox, n.clone()), 1).unwrap();
    let o2 = adapt(&AdaptationSetting::new(t.clone(), a2.abox, n), 1).unwrap();
    assert!(outcomes_correspond(&t, &o1, &o2));
}

#[test]
fn parser_examples() {
    let k = parse_kb("Tamoxifen SubClassOf Anti-oestrogen.").unwrap();
    assert_eq!(k.tbox.len(), 1);
    assert!(parse_kb("").unwrap().is_empty());
    let k = parse_kb("assert (some hasGene. CYP2D6)(Mary).").unwrap();
    assert_eq!(k.abox.len(), 1);
    assert_eq!(print_kb(&KnowledgeBase::default()), "");
    for file in ["t1.kb", "a1.kb", "n1.kb", "cancer_t.kb", "cancer_a.kb", "cancer_n.kb"] {
        let k = parse_kb(&data(file)).unwrap();
        assert_eq!(parse_kb(&print_kb(&k)).unwrap(), k, "{file}");
    }
}
