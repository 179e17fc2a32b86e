use rug::Rational;
use std::sync::Mutex;

/// Akiyama–Tanigawa state: `a` is the working row, `b` the numbers produced so far.
struct Table {
    a: Vec<Rational>,
    b: Vec<Rational>,
}

// Entries are appended, never rewritten.
static TABLE: Mutex<Table> = Mutex::new(Table {
    a: Vec::new(),
    b: Vec::new(),
});

/// Exact Bernoulli number with B_1 = -1/2.
pub fn bernoulli(n: usize) -> Rational {
    if n == 1 {
        return Rational::from((-1, 2));
    }
    if n > 1 && n % 2 == 1 {
        return Rational::new();
    }
    let mut t = TABLE.lock().unwrap_or_else(|e| e.into_inner());
    while t.b.len() <= n {
        let m = t.b.len();
        t.a.push(Rational::from((1, m as u64 + 1)));
        for j in (1..=m).rev() {
            let d = Rational::from(&t.a[j - 1] - &t.a[j]);
            t.a[j - 1] = d * j as u64;
        }
        let b0 = t.a[0].clone();
        t.b.push(b0);
    }
    t.b[n].clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(bernoulli(0), 1);
        assert_eq!(bernoulli(1), Rational::from((-1, 2)));
        assert_eq!(bernoulli(3), 0);
        assert_eq!(bernoulli(12), Rational::from((-691, 2730)));
    }
}
