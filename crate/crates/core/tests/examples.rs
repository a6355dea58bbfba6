//! Worked examples for characters, natural characters and McKay graphs.

use pin3::catalog::{self, Family, GroupSpec};
use pin3::chars::{self, natural_character};
use pin3::dyson;
use pin3::Cyc;

fn table(s: &str) -> (std::sync::Arc<pin3::grp::FiniteGroup>, std::sync::Arc<chars::CharacterTable>) {
    let g = catalog::build(&s.parse::<GroupSpec>().unwrap()).unwrap();
    let t = chars::table_of(&g).unwrap();
    (g, t)
}

#[test]
fn cyclic_of_order_two() {
    let (_, t) = table("C_2");
    assert_eq!(t.chars.len(), 2);
    assert!(t.chars[0].iter().all(|v| *v == Cyc::one()));
    let mut sign = t.chars[1].clone();
    sign.sort_by(|a, b| a.canonical_cmp(b));
    assert_eq!(sign, [Cyc::from_int(-1), Cyc::one()]);
}

#[test]
fn quaternion_group() {
    let (g, t) = table("BD_8");
    assert_eq!(t.degrees, [1, 1, 1, 1, 2]);
    let minus = g.classes().iter().position(|c| c.size == 1 && c.order == 2).unwrap();
    let two = &t.chars[4];
    assert_eq!(two[0], Cyc::from_int(2));
    assert_eq!(two[minus], Cyc::from_int(-2));
    assert_eq!(two.iter().filter(|v| v.is_zero()).count(), 3);
}

#[test]
fn natural_characters() {
    let (g, t) = table("BT_24");
    let nat = natural_character(&g, &t).unwrap();
    let row = nat.row.unwrap();
    assert_eq!(t.degrees[row], 2);
    assert_eq!(dyson::fs_complex(&t, row).unwrap(), -1);

    let (g, t) = table("C_1");
    assert_eq!(natural_character(&g, &t).unwrap().decomposition, [2]);

    for n in 3..=6 {
        let g = catalog::build(&GroupSpec::new(Family::C, n)).unwrap();
        let t = chars::table_of(&g).unwrap();
        let nat = natural_character(&g, &t).unwrap();
        assert_eq!(nat.row, None);
        let parts: Vec<usize> = (0..t.chars.len()).filter(|&i| nat.decomposition[i] != 0).collect();
        assert_eq!(parts.len(), 2);
        assert!(parts.iter().all(|&i| t.degrees[i] == 1));
    }
}

#[test]
fn tensor_with_trivial_is_identity() {
    let (_, t) = table("BO_48");
    for i in 0..t.chars.len() {
        let m = t.tensor_decompose(i, 0).unwrap();
        let want: Vec<i64> = (0..t.chars.len()).map(|k| i64::from(k == i)).collect();
        assert_eq!(m, want);
    }
}

#[test]
fn tables_are_deterministic() {
    let g = catalog::build(&"BI_120".parse::<GroupSpec>().unwrap()).unwrap();
    let a = chars::character_table(&g).unwrap();
    let b = chars::character_table(&g).unwrap();
    assert_eq!(a.chars, b.chars);
    assert_eq!(a.prime, b.prime);
}
