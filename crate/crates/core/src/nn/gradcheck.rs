use super::DenseNet;
use crate::error::Result;
use crate::Scalar;

pub const DEFAULT_EPS: f64 = 1e-5;
pub const RELATIVE_FLOOR: f64 = 1e-8;

/// `|a − n| / max(|a|, |n|, 1e-8)`. The floor sits below the resolution of
/// a central difference at the default step, so rounding noise on vanishing
/// components does not register.
pub fn relative_error<T: Scalar>(analytic: T, numeric: T) -> T {
    let denom = analytic.abs().max(numeric.abs()).max(T::lit(RELATIVE_FLOOR));
    (analytic - numeric).abs() / denom
}

/// Max relative error between `analytic` and central differences of `loss`
/// around `params`.
pub fn grad_check_flat<T, F>(params: &[T], analytic: &[T], mut loss: F, eps: T) -> T
where
    T: Scalar,
    F: FnMut(&[T]) -> T,
{
    assert_eq!(params.len(), analytic.len(), "gradient length must match parameters");
    let mut probe = params.to_vec();
    let two_eps = eps + eps;
    let mut worst = T::zero();
    for i in 0..params.len() {
        probe[i] = params[i] + eps;
        let up = loss(&probe);
        probe[i] = params[i] - eps;
        let down = loss(&probe);
        probe[i] = params[i];
        worst = worst.max(relative_error(analytic[i], (up - down) / two_eps));
    }
    worst
}

/// Checks backprop of `net` against finite differences.
///
/// `loss_fn` maps a network output to `(loss, dloss/doutput)`.
pub fn grad_check<T, F>(net: &DenseNet<T>, loss_fn: F, input: &[T], eps: T) -> Result<T>
where
    T: Scalar,
    F: Fn(&[T]) -> (T, Vec<T>),
{
    let (output, cache) = net.forward(input)?;
    let (_, out_grad) = loss_fn(&output);
    let (grads, _) = net.backward(&cache, &out_grad)?;
    let params = net.params_flat();
    let mut probe_net = net.clone();
    let mut failure = None;
    let worst = grad_check_flat(
        &params,
        &grads.flat(),
        |p| {
            probe_net.set_params_flat(p).expect("same shape");
            match probe_net.predict(input) {
                Ok(out) => loss_fn(&out).0,
                Err(e) => {
                    failure.get_or_insert(e);
                    T::nan()
                }
            }
        },
        eps,
    );
    match failure {
        Some(e) => Err(e),
        None => Ok(worst),
    }
}
