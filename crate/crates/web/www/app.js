import init, { dsbmDemo, geometricDemo, twoCliqueDemo } from "./pkg/spectra_cert_web.js";

const COLOURS = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"];
const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

// Found labels are arbitrary; map each to the planted label it overlaps most.
function alignFound(truth, found) {
  const votes = new Map();
  found.forEach((f, u) => {
    const key = f + ":" + truth[u];
    votes.set(key, (votes.get(key) || 0) + 1);
  });
  const best = new Map();
  for (const [key, count] of votes) {
    const [f, t] = key.split(":").map(Number);
    if (!best.has(f) || best.get(f)[1] < count) best.set(f, [t, count]);
  }
  return found.map((f) => best.get(f)[0]);
}

function drawPoints(view) {
  const c = $("plot"), ctx = c.getContext("2d");
  ctx.clearRect(0, 0, c.width, c.height);
  const xs = view.points.map((p) => p[0]), ys = view.points.map((p) => p[1]);
  const [x0, x1, y0, y1] = [Math.min(...xs), Math.max(...xs), Math.min(...ys), Math.max(...ys)];
  const span = Math.max(x1 - x0, y1 - y0) || 1, pad = 20, s = (c.width - 2 * pad) / span;
  const px = (p) => [pad + (p[0] - x0) * s, c.height - pad - (p[1] - y0) * s];

  if (view.edges.length && view.edges.length < 6000) {
    ctx.strokeStyle = "rgba(0,0,0,0.06)";
    ctx.beginPath();
    for (const [u, v] of view.edges) {
      const [a, b] = px(view.points[u]), [c2, d] = px(view.points[v]);
      ctx.moveTo(a, b);
      ctx.lineTo(c2, d);
    }
    ctx.stroke();
  }
  const found = alignFound(view.truth, view.found);
  view.points.forEach((p, u) => {
    const [x, y] = px(p);
    ctx.fillStyle = COLOURS[view.truth[u] % COLOURS.length];
    ctx.beginPath();
    ctx.arc(x, y, 3, 0, 2 * Math.PI);
    ctx.fill();
    if (found[u] !== view.truth[u]) {
      ctx.strokeStyle = "#000";
      ctx.beginPath();
      ctx.arc(x, y, 5.5, 0, 2 * Math.PI);
      ctx.stroke();
    }
  });
}

function drawSpectrum(view) {
  const c = $("spectrum"), ctx = c.getContext("2d");
  ctx.clearRect(0, 0, c.width, c.height);
  const eigs = view.spectrum.slice(0, 12), top = Math.max(2, ...eigs), w = c.width / eigs.length;
  const cuts = new Set(view.groups.slice(1, -1));
  eigs.forEach((l, i) => {
    const h = (l / top) * (c.height - 10);
    ctx.fillStyle = i < view.groups[view.groups.length - 1] ? "#1f77b4" : "#bbb";
    ctx.fillRect(i * w + 2, c.height - h, w - 4, h);
    if (cuts.has(i)) {
      ctx.strokeStyle = "#d62728";
      ctx.beginPath();
      ctx.moveTo(i * w, 0);
      ctx.lineTo(i * w, c.height);
      ctx.stroke();
    }
  });
}

const fmt = (x) => (x === null || x === undefined ? "n/a" : Math.abs(x) < 1e-3 && x !== 0 ? x.toExponential(2) : x.toFixed(4));

function showNumbers(caption, view) {
  $("caption").textContent = caption;
  const rows = [
    ["vertices / edges", `${view.n_vertices} / ${view.n_edges}`],
    ["true distance", fmt(view.true_distance)],
  ];
  for (const [name, b] of Object.entries(view.bounds)) {
    if (b && typeof b === "object" && "value" in b) rows.push([name, b.value === null ? "n/a" : fmt(b.value)]);
  }
  rows.push(["ρ̃", fmt(view.rho_tilde)], ["Ψ", fmt(view.psi)], ["misclassified volume", fmt(view.misclassified_fraction)]);
  rows.push(["groups", view.groups.join(", ")]);
  $("numbers").innerHTML = rows.map(([k, v]) => `<tr><td>${k}</td><td>${v}</td></tr>`).join("");
}

function run(caption, thunk) {
  $("err").textContent = "";
  try {
    const view = JSON.parse(thunk());
    drawPoints(view);
    drawSpectrum(view);
    showNumbers(caption, view);
  } catch (e) {
    $("err").textContent = String(e);
  }
}

await init();
$("dsbm-run").onclick = () =>
  run("Hermitian embedding of the bottom eigenvector", () =>
    dsbmDemo($("dsbm-kind").value === "cycle", num("dsbm-n"), num("dsbm-eps"), num("dsbm-seed")));
$("geo-run").onclick = () =>
  run("sample positions", () => geometricDemo(num("geo-d"), num("geo-ppc"), num("geo-seed")));
$("tc-run").onclick = () =>
  run("two cliques", () => twoCliqueDemo(num("tc-size"), num("tc-match"), num("tc-clique")));
$("geo-run").click();
