//! Binary PGM (P5) and PPM (P6) images with maxval 255, held as
//! `height x width x channels` tensors of values in `[0, 255]`.

use std::fs;
use std::path::Path;

use tucker_sketch::DenseTensor;

use crate::error::{BenchError, Result};

pub const PEAK: f64 = 255.0;

/// Parses a P5/P6 file. `source` only labels errors.
pub fn decode_image(bytes: &[u8], source: &Path) -> Result<DenseTensor> {
    let bad = |msg: &str| BenchError::format(source, msg);
    let mut pos = 0;
    let magic = header_token(bytes, &mut pos).ok_or_else(|| bad("empty file"))?;
    let channels = match magic {
        b"P5" => 1,
        b"P6" => 3,
        _ => return Err(bad("not a binary PGM/PPM file (expected P5 or P6)")),
    };
    let mut fields = [0usize; 3];
    for (slot, name) in fields.iter_mut().zip(["width", "height", "maxval"]) {
        let tok = header_token(bytes, &mut pos).ok_or_else(|| bad(&format!("missing {name}")))?;
        *slot = std::str::from_utf8(tok)
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad(&format!("malformed {name}")))?;
    }
    let [width, height, maxval] = fields;
    if maxval != 255 {
        return Err(bad(&format!("maxval {maxval} is not supported (only 255)")));
    }
    if width == 0 || height == 0 {
        return Err(bad("image has no pixels"));
    }
    // Exactly one whitespace byte separates the header from the raster.
    if pos >= bytes.len() || !bytes[pos].is_ascii_whitespace() {
        return Err(bad("truncated header"));
    }
    pos += 1;
    let expected = width * height * channels;
    let raster = &bytes[pos..];
    if raster.len() < expected {
        return Err(bad(&format!("truncated payload: {} of {} bytes", raster.len(), expected)));
    }
    DenseTensor::from_fn(&[height, width, channels], |i| {
        raster[(i[0] * width + i[1]) * channels + i[2]] as f64
    })
    .map_err(BenchError::from)
}

/// Next whitespace-delimited header token, skipping `#` comments.
fn header_token<'a>(bytes: &'a [u8], pos: &mut usize) -> Option<&'a [u8]> {
    loop {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if *pos < bytes.len() && bytes[*pos] == b'#' {
            while *pos < bytes.len() && bytes[*pos] != b'\n' {
                *pos += 1;
            }
            continue;
        }
        break;
    }
    let start = *pos;
    while *pos < bytes.len() && !bytes[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
    (start < *pos).then(|| &bytes[start..*pos])
}

/// Encodes as P5 (one channel) or P6 (three). Values are clamped to
/// `[0, 255]` and rounded to the nearest integer.
pub fn encode_image(x: &DenseTensor) -> Result<Vec<u8>> {
    let (height, width, channels) = image_shape(x)?;
    let magic = if channels == 1 { "P5" } else { "P6" };
    let mut out = format!("{magic}\n{width} {height}\n255\n").into_bytes();
    out.reserve(x.len());
    for r in 0..height {
        for c in 0..width {
            for ch in 0..channels {
                out.push(to_byte(x.get(&[r, c, ch])));
            }
        }
    }
    Ok(out)
}

fn to_byte(v: f64) -> u8 {
    if v.is_nan() {
        return 0;
    }
    v.clamp(0.0, PEAK).round() as u8
}

pub fn image_shape(x: &DenseTensor) -> Result<(usize, usize, usize)> {
    match *x.dims() {
        [h, w, c] if c == 1 || c == 3 => Ok((h, w, c)),
        [h, w] => Ok((h, w, 1)),
        _ => Err(BenchError::Usage(format!(
            "image tensors must be height x width x {{1,3}}, got {:?}",
            x.dims()
        ))),
    }
}

pub fn load_image_tensor(path: impl AsRef<Path>) -> Result<DenseTensor> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| BenchError::io(path, e))?;
    decode_image(&bytes, path)
}

pub fn save_image_tensor(x: &DenseTensor, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let bytes = encode_image(x)?;
    fs::write(path, bytes).map_err(|e| BenchError::io(path, e))
}
