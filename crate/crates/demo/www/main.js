import init, { heat_profile, symbol_decay, eq12_sides } from "./pkg/prehom_demo.js";

const $ = (id) => document.getElementById(id);
const num = (id) => parseFloat($(id).value);

function plot(canvas, series, { logY = false, logX = false } = {}) {
  const ctx = canvas.getContext("2d");
  const w = canvas.width, h = canvas.height, pad = 36;
  ctx.clearRect(0, 0, w, h);
  const tx = (v) => (logX ? Math.log10(v) : v);
  const ty = (v) => (logY ? Math.log10(Math.max(v, 1e-300)) : v);
  const pts = series.flatMap((s) => s.x.map((x, i) => [tx(x), ty(s.y[i])]));
  const xs = pts.map((p) => p[0]), ys = pts.map((p) => p[1]).filter(Number.isFinite);
  const x0 = Math.min(...xs), x1 = Math.max(...xs);
  const y0 = Math.min(...ys), y1 = Math.max(...ys) + 1e-12;
  const X = (v) => pad + ((v - x0) / (x1 - x0)) * (w - 2 * pad);
  const Y = (v) => h - pad - ((v - y0) / (y1 - y0)) * (h - 2 * pad);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, w - 2 * pad, h - 2 * pad);
  ctx.fillStyle = "#555";
  ctx.font = "11px sans-serif";
  ctx.fillText((logY ? "1e" : "") + y1.toPrecision(3), 2, pad + 4);
  ctx.fillText((logY ? "1e" : "") + y0.toPrecision(3), 2, h - pad);
  ctx.fillText((logX ? "1e" : "") + x0.toPrecision(3), pad, h - pad + 14);
  ctx.fillText((logX ? "1e" : "") + x1.toPrecision(3), w - pad - 30, h - pad + 14);
  for (const s of series) {
    ctx.strokeStyle = s.color;
    ctx.setLineDash(s.dash || []);
    ctx.beginPath();
    s.x.forEach((x, i) => {
      const px = X(tx(x)), py = Y(ty(s.y[i]));
      i ? ctx.lineTo(px, py) : ctx.moveTo(px, py);
    });
    ctx.stroke();
  }
  ctx.setLineDash([]);
}

function guard(out, f) {
  try {
    out.classList.remove("err");
    f();
  } catch (e) {
    out.classList.add("err");
    out.textContent = String(e);
  }
}

function heat() {
  guard($("h-out"), () => {
    const xs = Array.from({ length: 120 }, (_, i) => 0.05 + i * 0.05);
    const v = heat_profile(num("h-t"), num("h-a"), num("h-mu"), $("h-printed").checked, Float64Array.from(xs));
    const n = xs.length;
    const quad = Array.from(v.slice(0, n)), closed = Array.from(v.slice(n));
    const phi = xs.map((x) => Math.exp(-num("h-a") * (Math.log(x) - num("h-mu")) ** 2));
    plot($("h-plot"), [
      { x: xs, y: phi, color: "#aaa", dash: [4, 4] },
      { x: xs, y: quad, color: "#1f6fb4" },
      { x: xs, y: closed, color: "#d2691e", dash: [2, 3] },
    ]);
    const err = Math.max(...quad.map((q, i) => Math.abs(q - closed[i])));
    $("h-out").textContent =
      `grey: φ   blue: S_t φ by quadrature   orange: closed form\nmax |quadrature - closed form| = ${err.toExponential(2)}`;
  });
}

function decay() {
  guard($("d-out"), () => {
    const xis = Array.from({ length: 60 }, (_, i) => Math.pow(10, 0.5 + (i * 1.8) / 59));
    const v = Array.from(symbol_decay(num("d-t"), num("d-x"), Float64Array.from(xis)));
    plot($("d-plot"), [{ x: xis, y: v, color: "#1f6fb4" }], { logX: true, logY: true });
    const k = xis.findIndex((x) => x >= 50);
    const slope = Math.log(v[v.length - 1] / v[k]) / Math.log(xis[xis.length - 1] / xis[k]);
    $("d-out").textContent = `|a(x, ξ)| against ξ (log-log). slope from ξ = 50: ${slope.toFixed(2)}`;
  });
}

function eq12() {
  guard($("e-out"), () => {
    const s = num("e-s");
    const [l, r, rel] = eq12_sides(s, num("e-a"));
    $("e-out").textContent =
      `s = ${s.toFixed(2)}\nFourier side   ${l.toPrecision(15)}\ngamma side     ${r.toPrecision(15)}\nrelative gap   ${rel.toExponential(2)}`;
  });
}

await init();
for (const id of ["h-t", "h-a", "h-mu", "h-printed"]) $(id).addEventListener("input", heat);
for (const id of ["d-t", "d-x"]) $(id).addEventListener("input", decay);
for (const id of ["e-s", "e-a"]) $(id).addEventListener("input", eq12);
heat();
decay();
eq12();
