use num_bigint::BigUint;
use num_traits::One;

/// Iterated partial sum `j^{?m}`: `j^{?0} = j` and
/// `j^{?(m+1)} = 1^{?m} + 2^{?m} + … + j^{?m}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarNumber {
    pub j: u64,
    pub m: u32,
    pub value: BigUint,
}

/// Exact `j^{?m}`. Panics if `j == 0`.
pub fn star_number(j: u64, m: u32) -> StarNumber {
    assert!(j >= 1, "star numbers are defined for j >= 1");
    let mut row: Vec<BigUint> = (1..=j).map(BigUint::from).collect();
    for _ in 0..m {
        let mut acc = BigUint::default();
        for v in row.iter_mut() {
            acc += &*v;
            *v = acc.clone();
        }
    }
    StarNumber {
        j,
        m,
        value: row.pop().unwrap_or_else(BigUint::one),
    }
}
