// Plain-canvas front end for the wasm bindings; no framework.
import init, {
  capacity_grid,
  capacity_curves,
  typical_profile_info,
  volume_curves,
} from "./pkg/rll_wasm.js";

const $ = (id) => document.getElementById(id);

function viridis(t) {
  // coarse viridis ramp, good enough for a demo heatmap
  const stops = [
    [68, 1, 84], [59, 82, 139], [33, 145, 140], [94, 201, 98], [253, 231, 37],
  ];
  const x = Math.max(0, Math.min(1, t)) * (stops.length - 1);
  const i = Math.min(stops.length - 2, Math.floor(x));
  const f = x - i;
  const c = stops[i].map((a, k) => Math.round(a + f * (stops[i + 1][k] - a)));
  return `rgb(${c[0]},${c[1]},${c[2]})`;
}

function clear(canvas) {
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  return ctx;
}

const M = { l: 46, r: 12, t: 10, b: 34 }; // plot margins

function axes(ctx, W, H, xlabel, ylabel) {
  ctx.strokeStyle = "#888";
  ctx.lineWidth = 1;
  ctx.strokeRect(M.l, M.t, W - M.l - M.r, H - M.t - M.b);
  ctx.fillStyle = "#444";
  ctx.font = "12px system-ui";
  ctx.fillText(xlabel, W / 2 - 10, H - 8);
  ctx.save();
  ctx.translate(12, H / 2 + 10);
  ctx.rotate(-Math.PI / 2);
  ctx.fillText(ylabel, 0, 0);
  ctx.restore();
}

function drawHeatmap(data) {
  const canvas = $("heatmap");
  const ctx = clear(canvas);
  const W = canvas.width, H = canvas.height;
  const nw = data.omegas.length, nr = data.rhos.length;
  const pw = (W - M.l - M.r) / nw, ph = (H - M.t - M.b) / nr;
  for (let i = 0; i < nw; i++) {
    for (let j = 0; j < nr; j++) {
      const s = data.sigma[i][j];
      ctx.fillStyle = s === null ? "#ddd" : viridis(s / data.sigma_max);
      const x = M.l + i * pw;
      const y = H - M.b - (j + 1) * ph;
      ctx.fillRect(x, y, pw + 0.5, ph + 0.5);
    }
  }
  axes(ctx, W, H, "omega", "rho");
  // typical point
  const rhoMax = data.rhos[nr - 1];
  const px = M.l + data.omega_star * (W - M.l - M.r);
  const py = H - M.b - (data.rho_star / rhoMax) * (H - M.t - M.b);
  ctx.fillStyle = "#fff";
  ctx.strokeStyle = "#000";
  ctx.beginPath();
  ctx.arc(px, py, 4, 0, 2 * Math.PI);
  ctx.fill();
  ctx.stroke();
  ctx.fillStyle = "#444";
  ctx.font = "12px system-ui";
  ctx.fillText("0", M.l - 10, H - M.b + 12);
  ctx.fillText("1", W - M.r - 8, H - M.b + 12);
  ctx.fillText(rhoMax.toFixed(2), 8, M.t + 10);
}

function polyline(ctx, pts, W, H, xmin, xmax, ymax, color) {
  ctx.strokeStyle = color;
  ctx.lineWidth = 2;
  ctx.beginPath();
  pts.forEach(([x, y], k) => {
    const px = M.l + ((x - xmin) / (xmax - xmin)) * (W - M.l - M.r);
    const py = H - M.b - (y / ymax) * (H - M.t - M.b);
    if (k === 0) ctx.moveTo(px, py);
    else ctx.lineTo(px, py);
  });
  ctx.stroke();
}

function drawCurves(data, sigmaMax) {
  const canvas = $("curves");
  const ctx = clear(canvas);
  const W = canvas.width, H = canvas.height;
  axes(ctx, W, H, "omega or rho (rescaled)", "sigma");
  const ymax = Math.max(sigmaMax, 1e-9) * 1.05;
  const rescale = (pts) => {
    const xs = pts.map((p) => p[0]);
    const lo = Math.min(...xs), hi = Math.max(...xs);
    return pts.map(([x, y]) => [(x - lo) / (hi - lo || 1), y]);
  };
  polyline(ctx, rescale(data.weight_curve), W, H, 0, 1, ymax, "#2060c0");
  polyline(ctx, rescale(data.runs_curve), W, H, 0, 1, ymax, "#e07820");
}

function drawHist(data) {
  const canvas = $("hist");
  const ctx = clear(canvas);
  const W = canvas.width, H = canvas.height;
  axes(ctx, W, H, "run length", "beta*");
  const bars = data.bars;
  if (!bars.length) return;
  const ymax = Math.max(...bars.map((b) => b[1])) * 1.15 || 1;
  const bw = (W - M.l - M.r) / bars.length;
  ctx.fillStyle = "#2a9d8f";
  bars.forEach(([ell, beta], k) => {
    const h = (beta / ymax) * (H - M.t - M.b);
    ctx.fillRect(M.l + k * bw + 3, H - M.b - h, bw - 6, h);
    ctx.fillStyle = "#444";
    ctx.font = "11px system-ui";
    ctx.fillText(String(ell), M.l + k * bw + bw / 2 - 4, H - M.b + 14);
    ctx.fillStyle = "#2a9d8f";
  });
}

function drawVolume(data) {
  const canvas = $("volume");
  const ctx = clear(canvas);
  const W = canvas.width, H = canvas.height;
  axes(ctx, W, H, "rho", "bits");
  const v = data.curve.map((c) => [c[0], c[1]]);
  const rate = data.curve.map((c) => [c[0], c[2]]);
  polyline(ctx, v, W, H, 0, data.rho_max, 1.05, "#2a7a2a");
  polyline(ctx, rate, W, H, 0, data.rho_max, 1.05, "#c03030");
  const bx = M.l + (data.breakpoint / data.rho_max) * (W - M.l - M.r);
  ctx.strokeStyle = "#666";
  ctx.setLineDash([4, 4]);
  ctx.beginPath();
  ctx.moveTo(bx, M.t);
  ctx.lineTo(bx, H - M.b);
  ctx.stroke();
  ctx.setLineDash([]);
}

function parseOrShow(text) {
  const data = JSON.parse(text);
  if (data.error) {
    $("error").textContent = data.error;
    return null;
  }
  return data;
}

function recompute() {
  $("error").textContent = "";
  const spec = $("runset").value;
  const grid = parseOrShow(capacity_grid(spec, 140, 140));
  if (!grid) return;
  const curves = parseOrShow(capacity_curves(spec, 300));
  const profile = parseOrShow(typical_profile_info(spec, 12));
  if (!curves || !profile) return;
  drawHeatmap(grid);
  drawCurves(curves, grid.sigma_max);
  drawHist(profile);
  $("stats").innerHTML =
    `<span class="stat">lambda = ${profile.lambda.toFixed(10)}</span> ` +
    `<span class="stat">capacity = ${profile.capacity.toFixed(10)} bits</span> ` +
    `<span class="stat">rho* = ${profile.rho_star.toFixed(10)}</span>`;
}

function recomputeVolume() {
  const d = Number($("dval").value);
  $("dshow").textContent = String(d);
  const data = parseOrShow(volume_curves(d, 300));
  if (data) drawVolume(data);
}

await init();
$("compute").addEventListener("click", recompute);
$("runset").addEventListener("keydown", (e) => {
  if (e.key === "Enter") recompute();
});
$("dval").addEventListener("input", recomputeVolume);
recompute();
recomputeVolume();
