import init, * as cp from "./pkg/composite_pulses_wasm.js";

const COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

function linspace(a, b, n) {
  return Array.from({ length: n }, (_, i) => a + ((b - a) * i) / (n - 1));
}

// Draws line series on a canvas. Each series: { x, y, color, dash, label }.
function plot(canvas, series, { logY = false, yMin, yMax, xLabel = "", yLabel = "", hlines = [] } = {}) {
  const ctx = canvas.getContext("2d");
  const W = canvas.width, H = canvas.height, L = 60, R = 10, T = 10, B = 40;
  ctx.clearRect(0, 0, W, H);
  const xs = series.flatMap((s) => s.x);
  const x0 = Math.min(...xs), x1 = Math.max(...xs);
  const tf = (v) => (logY ? Math.log10(Math.max(v, 1e-300)) : v);
  const finite = series.flatMap((s) => s.y).filter(Number.isFinite).map(tf);
  const y0 = yMin !== undefined ? tf(yMin) : Math.min(...finite);
  const y1 = yMax !== undefined ? tf(yMax) : Math.max(...finite);
  const px = (x) => L + ((x - x0) / (x1 - x0 || 1)) * (W - L - R);
  const py = (y) => T + (1 - (Math.min(Math.max(tf(y), y0), y1) - y0) / (y1 - y0 || 1)) * (H - T - B);

  ctx.strokeStyle = "#888";
  ctx.strokeRect(L, T, W - L - R, H - T - B);
  ctx.fillStyle = "#444";
  ctx.font = "11px sans-serif";
  for (let i = 0; i <= 5; i++) {
    const x = x0 + ((x1 - x0) * i) / 5;
    ctx.fillText(x.toPrecision(3), px(x) - 10, H - B + 14);
    const yv = y0 + ((y1 - y0) * i) / 5;
    const label = logY ? `1e${yv.toFixed(1)}` : yv.toPrecision(3);
    ctx.fillText(label, 4, T + (1 - i / 5) * (H - T - B) + 4);
  }
  ctx.fillText(xLabel, W / 2, H - 8);
  ctx.fillText(yLabel, L + 6, T + 12);

  for (const h of hlines) {
    ctx.strokeStyle = "#999";
    ctx.setLineDash([2, 3]);
    ctx.beginPath();
    ctx.moveTo(L, py(h));
    ctx.lineTo(W - R, py(h));
    ctx.stroke();
  }
  series.forEach((s, k) => {
    ctx.strokeStyle = s.color ?? COLORS[k % COLORS.length];
    ctx.setLineDash(s.dash ?? []);
    ctx.beginPath();
    let pen = false;
    s.x.forEach((x, i) => {
      const y = s.y[i];
      if (!Number.isFinite(y)) { pen = false; return; }
      if (pen) ctx.lineTo(px(x), py(y)); else ctx.moveTo(px(x), py(y));
      pen = true;
    });
    ctx.stroke();
    ctx.setLineDash([]);
    ctx.fillStyle = ctx.strokeStyle;
    ctx.fillText(s.label ?? "", W - R - 150, T + 14 + 14 * k);
  });
}

const $ = (id) => document.getElementById(id);
const POINTS = 601;

function showProfile() {
  const name = $("profile-name").value;
  const threshold = Number($("profile-threshold").value);
  const maxOffset = 1.5;
  const r = linspace(0, maxOffset, POINTS);
  const p = Array.from(cp.excitationProfile(name, maxOffset, POINTS));
  const single = Array.from(cp.inlineProfile(1, 1, 1, new Float64Array(), maxOffset, POINTS));
  const logY = $("profile-log").checked;
  plot($("profile-plot"), [
    { x: r, y: p, label: name },
    { x: r, y: single, color: "#aaa", dash: [4, 4], label: "single π pulse" },
  ], { logY, yMin: logY ? 1e-8 : 0, yMax: 1, xLabel: "r / ξ", yLabel: "p", hlines: [threshold] });
  const [crosstalk, robust] = cp.radii(name, threshold);
  const fmt = (v) => (Number.isNaN(v) ? "none" : `${v.toFixed(4)} ξ`);
  $("profile-info").textContent =
    `${cp.describe(name)}\ncrosstalk radius ${fmt(crosstalk)}, robustness radius ${fmt(robust)}`;
}

function showScan() {
  const name = $("scan-name").value;
  const range = Number($("scan-range").value);
  const detuning = Number($("scan-detuning").value);
  const d = linspace(-range, range, POINTS);
  const plain = Array.from(cp.phaseScan(name, range, POINTS, 0));
  const shifted = Array.from(cp.phaseScan(name, range, POINTS, detuning));
  const threshold = cp.phaseThreshold(1e-4);
  plot($("scan-plot"), [
    { x: d, y: plain, label: name },
    { x: d, y: shifted, dash: [5, 3], label: `Δ·T = ${detuning}` },
  ], { logY: true, yMin: 1e-6, yMax: 1, xLabel: "area deviation", yLabel: "|φ − target| / π", hlines: [threshold] });
  $("scan-info").textContent = `${cp.describe(name)}\nthreshold for 1e-4 infidelity: ${threshold.toExponential(3)} π`;
}

function runSolve(event) {
  event?.preventDefault();
  const f = new FormData($("solve-form"));
  const num = (k) => Number(f.get(k));
  const table = $("solve-table");
  table.innerHTML = "";
  let out;
  try {
    out = cp.solve(num("pulses"), num("area"), num("target"), num("n1"), num("n2"), num("starts"), BigInt(num("seed")));
  } catch (e) {
    $("solve-info").textContent = String(e);
    return;
  }
  const count = out[0];
  const width = (out.length - 1) / Math.max(count, 1);
  $("solve-info").textContent = `${count} distinct solution(s)`;
  const head = table.insertRow();
  ["#", "residual", "phases / π"].forEach((h) => { const th = document.createElement("th"); th.textContent = h; head.appendChild(th); });
  for (let i = 0; i < count; i++) {
    const row = out.slice(1 + i * width, 1 + (i + 1) * width);
    const phases = Array.from(row.slice(1));
    const tr = table.insertRow();
    tr.className = "pick";
    [String(i), row[0].toExponential(2), phases.map((p) => p.toFixed(4)).join("; ")].forEach((t) => (tr.insertCell().textContent = t));
    tr.onclick = () => {
      table.querySelectorAll("tr").forEach((r) => r.classList.remove("active"));
      tr.classList.add("active");
      const r = linspace(0, 1.5, POINTS);
      const p = Array.from(cp.inlineProfile(num("pulses"), num("area"), num("target"), new Float64Array(phases), 1.5, POINTS));
      plot($("solve-plot"), [{ x: r, y: p, label: `solution ${i}` }], { logY: true, yMin: 1e-8, yMax: 1, xLabel: "r / ξ", yLabel: "p" });
    };
    if (i === 0) tr.onclick();
  }
}

await init();
const names = cp.catalogNames().split("\n");
for (const n of names) $("profile-name").add(new Option(n, n));
for (const n of names.filter((n) => n.includes(","))) $("scan-name").add(new Option(n, n));
$("profile-name").value = "N5(pi)";
$("scan-name").value = "P11(pi,3pi/2)";
["profile-name", "profile-log", "profile-threshold"].forEach((id) => $(id).addEventListener("change", showProfile));
["scan-name", "scan-range", "scan-detuning"].forEach((id) => $(id).addEventListener("change", showScan));
$("solve-form").addEventListener("submit", runSolve);
showProfile();
showScan();
runSolve();
