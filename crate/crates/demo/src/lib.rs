//! WebAssembly bindings for the browser demo in `www/`.

pub mod ops;

use wasm_bindgen::prelude::*;

use tucker_sketch::Algorithm;

fn js(e: tucker_sketch::Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen]
pub fn algorithm_names() -> Vec<String> {
    Algorithm::ALL.iter().map(|a| a.name().to_string()).collect()
}

#[wasm_bindgen]
pub fn hilbert_curves(n: usize, max_rank: usize, seed: u64) -> Result<Vec<f64>, JsError> {
    ops::hilbert_curves(n, max_rank, seed).map_err(js)
}

#[wasm_bindgen]
pub struct Compressed {
    rgba: Vec<u8>,
    pub psnr: f64,
    pub rel_error: f64,
    pub ratio: f64,
}

#[wasm_bindgen]
impl Compressed {
    #[wasm_bindgen(getter)]
    pub fn rgba(&self) -> Vec<u8> {
        self.rgba.clone()
    }
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn compress_image(
    rgba: &[u8],
    width: usize,
    height: usize,
    r1: usize,
    r2: usize,
    r3: usize,
    algorithm: &str,
    seed: u64,
) -> Result<Compressed, JsError> {
    let algorithm: Algorithm = algorithm.parse().map_err(js)?;
    let c = ops::compress_rgba(rgba, width, height, [r1, r2, r3], algorithm, seed).map_err(js)?;
    Ok(Compressed { rgba: c.rgba, psnr: c.psnr, rel_error: c.rel_error, ratio: c.ratio })
}

#[wasm_bindgen]
pub fn power_sweep(n: usize, rank: usize, gamma: f64, max_q: usize, seed: u64) -> Result<Vec<f64>, JsError> {
    ops::power_sweep(n, rank, gamma, max_q, seed).map_err(js)
}
