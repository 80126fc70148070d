#![allow(dead_code)]

use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use decoupled_mix::pipeline::{save_image, ImageFormat};
use decoupled_mix::{ImageTensor, RngStream};

pub fn random_image(rng: &mut RngStream, h: usize, w: usize, c: usize) -> ImageTensor {
    ImageTensor::from_fn(h, w, c, |_, _, _| rng.uniform()).unwrap()
}

/// Direct quadruple-loop DFT, independent of the library's transforms.
pub fn brute_dft(x: &ImageTensor) -> (Vec<f64>, Vec<f64>) {
    let (h, w, c) = x.shape();
    let mut re = vec![0.0; h * w * c];
    let mut im = vec![0.0; h * w * c];
    for ch in 0..c {
        for u in 0..h {
            for v in 0..w {
                let (mut sr, mut si) = (0.0, 0.0);
                for y in 0..h {
                    for z in 0..w {
                        let th = -2.0 * PI * ((y * u) as f64 / h as f64 + (z * v) as f64 / w as f64);
                        sr += x.get(ch, y, z) * th.cos();
                        si += x.get(ch, y, z) * th.sin();
                    }
                }
                re[ch * h * w + u * w + v] = sr;
                im[ch * h * w + u * w + v] = si;
            }
        }
    }
    (re, im)
}

/// A smooth pattern plus noise, so the images have both low and high frequencies.
pub fn synthetic_image(rng: &mut RngStream, h: usize, w: usize) -> ImageTensor {
    let (fx, fy, phase) = (1.0 + 3.0 * rng.uniform(), 1.0 + 3.0 * rng.uniform(), 2.0 * PI * rng.uniform());
    let noise: Vec<f64> = (0..h * w * 3).map(|_| rng.uniform()).collect();
    ImageTensor::from_fn(h, w, 3, |c, y, x| {
        let base = 0.5 + 0.35 * ((fx * x as f64 / w as f64 + fy * y as f64 / h as f64) * PI + phase + c as f64).sin();
        (0.8 * base + 0.2 * noise[c * h * w + y * w + x]).clamp(0.0, 1.0)
    })
    .unwrap()
}

/// A blob-shaped soft foreground mask as a single-channel image.
pub fn synthetic_mask(rng: &mut RngStream, h: usize, w: usize) -> ImageTensor {
    let (cy, cx, r) = (h as f64 * (0.3 + 0.4 * rng.uniform()), w as f64 * (0.3 + 0.4 * rng.uniform()), 0.25 * h.min(w) as f64);
    ImageTensor::from_fn(h, w, 1, |_, y, x| {
        let d = ((y as f64 - cy).powi(2) + (x as f64 - cx).powi(2)).sqrt();
        (1.5 - d / r).clamp(0.0, 1.0)
    })
    .unwrap()
}

/// Writes `n` synthetic PNGs (masks for every `mask_every`-th item, if any)
/// and a manifest with `classes` classes. Returns the manifest path.
pub fn write_dataset(dir: &Path, n: usize, size: usize, classes: usize, mask_every: Option<usize>, seed: u64) -> std::path::PathBuf {
    fs::create_dir_all(dir.join("img")).unwrap();
    fs::create_dir_all(dir.join("mask")).unwrap();
    let mut rng = RngStream::new(seed, 99);
    let mut text = format!("{{\"version\":1,\"classes\":{classes}}}\n");
    for i in 0..n {
        let img = synthetic_image(&mut rng, size, size);
        save_image(&img, &dir.join(format!("img/{i:03}.png")), ImageFormat::Png).unwrap();
        let mask = match mask_every {
            Some(k) if i % k == 0 => {
                let m = synthetic_mask(&mut rng, size, size);
                save_image(&m, &dir.join(format!("mask/{i:03}.png")), ImageFormat::Png).unwrap();
                format!(",\"mask\":\"mask/{i:03}.png\"")
            }
            _ => String::new(),
        };
        text.push_str(&format!("{{\"image\":\"img/{i:03}.png\",\"label\":{}{mask}}}\n", i % classes));
    }
    let path = dir.join("manifest.jsonl");
    fs::write(&path, text).unwrap();
    path
}

/// All files under `dir`, sorted by relative path, with their bytes.
pub fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in fs::read_dir(&d).unwrap() {
            let p = entry.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                let rel = p.strip_prefix(dir).unwrap().to_string_lossy().into_owned();
                out.push((rel, fs::read(&p).unwrap()));
            }
        }
    }
    out.sort();
    out
}
