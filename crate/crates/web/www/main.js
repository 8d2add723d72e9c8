import init, { f11_curve, flow_trajectory, verify_identity } from "./pkg/hypersym_web.js";

const OPERATORS = {
  f11: ["E_a", "E_a'", "E_b", "E_b'", "E_ab", "I_a", "I_b", "I"],
  psi2: ["E_a", "E_b", "E_c", "E_ab", "E_ac", "I_a", "I_b", "I_c", "I"],
};
const IDENTITIES = [
  "I-F11-RAISE-A", "I-F11-RAISE-B", "I-F11-LOWER-A", "I-F11-LOWER-B", "I-F11-SHIFT",
  "I-PSI2-REDUCTION", "I-PSI2-LOWER-B", "I-PSI2-LOWER-C", "I-PSI2-SHIFT-X", "I-PSI2-SHIFT-Y",
];
const COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

const $ = (id) => document.getElementById(id);

function fill(select, items) {
  select.innerHTML = items.map((s) => `<option>${s}</option>`).join("");
}

// series: list of {xs, ys, color, dashed}
function plot(canvas, series) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  ctx.clearRect(0, 0, w, h);
  const pts = series.flatMap((s) => s.ys.filter(Number.isFinite));
  const xs = series.flatMap((s) => s.xs);
  if (!pts.length) return;
  let [y0, y1] = [Math.min(...pts), Math.max(...pts)];
  if (y0 === y1) { y0 -= 1; y1 += 1; }
  const [x0, x1] = [Math.min(...xs), Math.max(...xs)];
  const pad = 30;
  const sx = (x) => pad + ((x - x0) / (x1 - x0 || 1)) * (w - 2 * pad);
  const sy = (y) => h - pad - ((y - y0) / (y1 - y0)) * (h - 2 * pad);
  ctx.strokeStyle = "#999";
  ctx.beginPath();
  ctx.moveTo(pad, sy(Math.min(Math.max(0, y0), y1)));
  ctx.lineTo(w - pad, sy(Math.min(Math.max(0, y0), y1)));
  ctx.stroke();
  ctx.fillStyle = "#555";
  ctx.fillText(y1.toPrecision(4), 2, pad - 5);
  ctx.fillText(y0.toPrecision(4), 2, h - 5);
  for (const s of series) {
    ctx.strokeStyle = s.color;
    ctx.setLineDash(s.dashed ? [4, 4] : []);
    ctx.beginPath();
    let pen = false;
    s.xs.forEach((x, i) => {
      const y = s.ys[i];
      if (!Number.isFinite(y)) { pen = false; return; }
      pen ? ctx.lineTo(sx(x), sy(y)) : ctx.moveTo(sx(x), sy(y));
      pen = true;
    });
    ctx.stroke();
  }
  ctx.setLineDash([]);
}

function drawCurve() {
  const [a, b, x0, x1] = ["c-a", "c-b", "c-x0", "c-x1"].map((id) => parseFloat($(id).value));
  const n = 400;
  try {
    const ys = Array.from(f11_curve(a, b, x0, x1, n));
    const xs = ys.map((_, i) => x0 + ((x1 - x0) * i) / (n - 1));
    plot($("c-canvas"), [{ xs, ys, color: COLORS[0] }]);
    $("c-msg").textContent = `1F1(${a}; ${b}; ${x1}) ≈ ${ys[n - 1]}`;
  } catch (e) {
    $("c-msg").textContent = String(e);
  }
}

function drawFlow() {
  try {
    const out = JSON.parse(flow_trajectory(
      $("f-family").value, $("f-op").value, $("f-start").value,
      parseFloat($("f-alpha").value), parseFloat($("f-step").value),
    ));
    const series = out.variables.flatMap((name, k) => [
      { xs: out.alpha, ys: out.rk4.map((s) => s[k]), color: COLORS[k % COLORS.length] },
      { xs: out.alpha, ys: out.exact.map((s) => s[k]), color: COLORS[k % COLORS.length], dashed: true },
    ]);
    plot($("f-canvas"), series);
    const legend = out.variables.map((v, k) => `${v}: ${COLORS[k % COLORS.length]}`).join("  ");
    $("f-msg").textContent = `${out.system.join("\n")}\n\nsolid RK4, dashed closed form; ${legend}\nmax |RK4 - closed form| = ${out.max_deviation.toExponential(3)}`;
  } catch (e) {
    $("f-msg").textContent = String(e);
  }
}

function checkIdentity() {
  const msg = $("i-msg");
  try {
    const out = JSON.parse(verify_identity(
      $("i-id").value, $("i-variant").value, $("i-a").value, $("i-b").value, $("i-c").value,
      parseInt($("i-n").value, 10), parseInt($("i-m").value, 10),
    ));
    msg.className = out.verified ? "ok" : "bad";
    msg.textContent = `${out.formula}\n\n` + (out.verified
      ? "verified: every coefficient agrees"
      : `mismatch at ${out.witness.monomial}: lhs ${out.witness.lhs}, rhs ${out.witness.rhs}`);
  } catch (e) {
    msg.className = "bad";
    msg.textContent = String(e);
  }
}

await init();
fill($("f-op"), OPERATORS.f11);
fill($("i-id"), IDENTITIES);
$("f-family").addEventListener("change", () => fill($("f-op"), OPERATORS[$("f-family").value]));
$("c-go").addEventListener("click", drawCurve);
$("f-go").addEventListener("click", drawFlow);
$("i-go").addEventListener("click", checkIdentity);
drawCurve();
drawFlow();
