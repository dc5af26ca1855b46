//! Radial map from the exponential-weight gas to the ball-restricted gas.

use rand::Rng;

use super::{stream_rng, Diagnostics, SampleBatch};
use crate::error::Result;
use crate::types::{EnsembleParams, Exponent};

/// Map each gas point `x` to `u^{1/d} x / ‖x‖_p` with fresh uniform `u`.
///
/// If `x` follows `e^{−‖x‖_p^p} f_{a,b,c}` then the image follows
/// `f_{a,b,c}` restricted to the unit `p`-ball. At `p = ∞` the gas already
/// lives on the cube and the map is the identity.
pub fn ball_pushforward(
    gas: &SampleBatch,
    params: &EnsembleParams,
    p: Exponent,
    seed: u64,
) -> Result<SampleBatch> {
    let mut out = gas.clone();
    out.diagnostics = Diagnostics {
        method: format!("{}+pushforward", gas.diagnostics.method),
        ..gas.diagnostics.clone()
    };
    if p.is_infinite() {
        return Ok(out);
    }
    let n = gas.n;
    let inv_d = 1.0 / params.d() as f64;
    let mut start = 0usize;
    for (chain, &len) in gas.chain_lengths.iter().enumerate() {
        let mut rng = stream_rng(seed, chain as u64);
        for k in start..start + len {
            let x = &mut out.coords[k * n..(k + 1) * n];
            let r = p.norm(x);
            if r == 0.0 {
                continue;
            }
            let u: f64 = loop {
                let u: f64 = rng.random();
                if u > 0.0 {
                    break u;
                }
            };
            let scale = u.powf(inv_d) / r;
            x.iter_mut().for_each(|v| *v *= scale);
        }
        start += len;
    }
    Ok(out)
}
