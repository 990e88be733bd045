import init, { logPoints, plateCurve, halfspaceCurve, responseCurve } from "../pkg/vdw_web.js";

const $ = (id) => document.getElementById(id);
const status = (s) => ($("status").textContent = s);

function draw(xs, ys, logX, label) {
  const c = $("plot");
  const g = c.getContext("2d");
  const pad = 50;
  g.clearRect(0, 0, c.width, c.height);
  const fx = logX ? Math.log10 : (x) => x;
  const good = ys.map((y, i) => [fx(xs[i]), y]).filter(([, y]) => Number.isFinite(y));
  if (good.length === 0) return status("no finite points");
  const x0 = Math.min(...good.map((p) => p[0])), x1 = Math.max(...good.map((p) => p[0]));
  let y0 = Math.min(...good.map((p) => p[1])), y1 = Math.max(...good.map((p) => p[1]));
  if (y1 - y0 < 1e-9) { y0 -= 0.5; y1 += 0.5; }
  const px = (x) => pad + ((x - x0) / (x1 - x0 || 1)) * (c.width - 2 * pad);
  const py = (y) => c.height - pad - ((y - y0) / (y1 - y0)) * (c.height - 2 * pad);
  g.strokeStyle = "#999";
  g.strokeRect(pad, pad, c.width - 2 * pad, c.height - 2 * pad);
  g.fillStyle = "#000";
  g.fillText(y1.toPrecision(4), 4, pad + 4);
  g.fillText(y0.toPrecision(4), 4, c.height - pad);
  g.fillText((logX ? "log10 " : "") + label, c.width / 2 - 40, c.height - 15);
  g.strokeStyle = "#c33";
  g.beginPath();
  good.forEach(([x, y], i) => (i ? g.lineTo(px(x), py(y)) : g.moveTo(px(x), py(y))));
  g.stroke();
}

function grid() {
  return logPoints(+$("lmin").value, +$("lmax").value, 33);
}

function guarded(f) {
  return () => {
    try {
      f();
    } catch (e) {
      status(String(e));
    }
  };
}

await init();
status("ready");

$("halfspace").onclick = guarded(() => {
  status("integrating…");
  const l = grid();
  const r = halfspaceCurve($("magnetic").checked, $("vertical").checked, +$("z").value, l, 1e-5);
  draw(l, r, true, "l");
  status(`half space, ${r.filter(Number.isNaN).length} unconverged points`);
});

$("plate").onclick = guarded(() => {
  const l = grid();
  draw(l, plateCurve($("conductor").checked, $("vertical").checked, +$("z").value, l), true, "l");
  status("ideal plate, nonretarded closed form");
});

$("response").onclick = guarded(() => {
  const n = 200, umax = 10;
  const u = Array.from({ length: n }, (_, k) => (umax * k) / (n - 1));
  draw(u, responseCurve(3, 1, 0.001, umax, n), false, "u");
  status("permittivity on the imaginary axis");
});
