/// Logistic function, evaluated so that neither tail overflows.
#[inline]
pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

#[inline]
pub fn tanh_act(x: f64) -> f64 {
    x.tanh()
}
