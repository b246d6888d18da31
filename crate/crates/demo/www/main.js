import init, { algorithm_names, hilbert_curves, compress_image, power_sweep } from "./pkg/tucker_demo.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);
const seed = (id) => BigInt(Math.max(0, Math.floor(num(id))));
const COLORS = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd"];

function guarded(out, fn) {
  return () => {
    out.classList.remove("err");
    try {
      fn();
    } catch (e) {
      out.classList.add("err");
      out.textContent = String(e.message ?? e);
    }
  };
}

function plotCurves(canvas, names, values, maxRank) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const pad = 40;
  ctx.clearRect(0, 0, w, h);
  const logs = values.map((v) => Math.log10(Math.max(v, 1e-17)));
  const lo = Math.floor(Math.min(...logs));
  const hi = Math.ceil(Math.max(...logs));
  const x = (r) => pad + ((r - 1) / Math.max(1, maxRank - 1)) * (w - 2 * pad);
  const y = (l) => h - pad - ((l - lo) / Math.max(1, hi - lo)) * (h - 2 * pad);
  ctx.strokeStyle = "#999";
  ctx.fillStyle = "#555";
  ctx.strokeRect(pad, pad, w - 2 * pad, h - 2 * pad);
  for (let e = lo; e <= hi; e++) ctx.fillText(`1e${e}`, 2, y(e) + 3);
  for (let r = 1; r <= maxRank; r++) ctx.fillText(String(r), x(r) - 3, h - pad + 14);
  names.forEach((_, a) => {
    ctx.strokeStyle = COLORS[a % COLORS.length];
    ctx.beginPath();
    for (let r = 1; r <= maxRank; r++) {
      const l = logs[a * maxRank + r - 1];
      r === 1 ? ctx.moveTo(x(r), y(l)) : ctx.lineTo(x(r), y(l));
    }
    ctx.stroke();
  });
}

function testImage(w, h) {
  const px = new Uint8ClampedArray(w * h * 4);
  for (let i = 0; i < h; i++) {
    for (let j = 0; j < w; j++) {
      const k = (i * w + j) * 4;
      const d = Math.hypot(i - h / 2, j - w / 2);
      px[k] = 128 + 127 * Math.sin(j / 9);
      px[k + 1] = 128 + 127 * Math.cos(i / 13);
      px[k + 2] = d < h / 4 ? 230 : 40 + ((i ^ j) & 31);
      px[k + 3] = 255;
    }
  }
  return new ImageData(px, w, h);
}

function showImage(canvas, data) {
  canvas.width = data.width;
  canvas.height = data.height;
  canvas.getContext("2d").putImageData(data, 0, 0);
}

async function loadFile(file) {
  const bitmap = await createImageBitmap(file);
  const scale = Math.min(1, 320 / Math.max(bitmap.width, bitmap.height));
  const c = document.createElement("canvas");
  c.width = Math.max(1, Math.round(bitmap.width * scale));
  c.height = Math.max(1, Math.round(bitmap.height * scale));
  const ctx = c.getContext("2d");
  ctx.drawImage(bitmap, 0, 0, c.width, c.height);
  return ctx.getImageData(0, 0, c.width, c.height);
}

async function main() {
  await init();
  const names = algorithm_names();
  $("status").textContent = "Ready. Everything runs locally in WebAssembly.";
  names.forEach((n) => $("i-algo").add(new Option(n, n)));
  $("i-algo").value = names.find((n) => n.startsWith("sub")) ?? names[0];

  $("h-run").onclick = guarded($("h-legend"), () => {
    const maxRank = num("h-r");
    const t0 = performance.now();
    const values = hilbert_curves(num("h-n"), maxRank, seed("h-seed"));
    plotCurves($("h-plot"), names, values, maxRank);
    $("h-legend").innerHTML = names
      .map((n, a) => `<span style="color:${COLORS[a]}">${n}</span>: rank ${maxRank} error ${values[a * maxRank + maxRank - 1].toExponential(3)}`)
      .join("\n") + `\n${(performance.now() - t0).toFixed(0)} ms`;
  });

  let source = testImage(192, 144);
  showImage($("i-src"), source);
  $("i-file").onchange = async (ev) => {
    if (ev.target.files.length) {
      source = await loadFile(ev.target.files[0]);
      showImage($("i-src"), source);
    }
  };
  $("i-run").onclick = guarded($("i-out"), () => {
    const r = compress_image(
      new Uint8Array(source.data.buffer),
      source.width,
      source.height,
      num("i-r1"),
      num("i-r2"),
      num("i-r3"),
      $("i-algo").value,
      seed("i-seed"),
    );
    showImage($("i-dst"), new ImageData(new Uint8ClampedArray(r.rgba), source.width, source.height));
    $("i-out").textContent =
      `PSNR ${r.psnr.toFixed(2)} dB, relative error ${r.rel_error.toExponential(3)}, ` +
      `model size ${(100 * r.ratio).toFixed(1)}% of the pixels`;
    r.free();
  });

  $("p-run").onclick = guarded($("p-out"), () => {
    const errs = power_sweep(num("p-n"), num("p-r"), num("p-g"), num("p-q"), seed("p-seed"));
    $("p-out").textContent = [`Sketch-STHOSVD       ${errs[0].toExponential(3)}`]
      .concat(Array.from(errs.slice(1), (e, i) => `sub-Sketch q = ${i + 1}     ${e.toExponential(3)}`))
      .join("\n");
  });
}

main().catch((e) => {
  $("status").textContent = `Failed to load: ${e}`;
  $("status").classList.add("err");
});
