(function () {
  "use strict";

  var TILE_URL = "https://{s}.tile.openstreetmap.org/{z}/{x}/{y}.png";
  var ROSTER_LIMIT = 50;

  function banner(message) {
    var div = document.createElement("div");
    div.className = "cs-error";
    div.textContent = "Map data could not be loaded: " + message;
    document.body.appendChild(div);
  }

  function escapeHtml(s) {
    return String(s).replace(/[&<>"']/g, function (c) {
      return { "&": "&amp;", "<": "&lt;", ">": "&gt;", '"': "&quot;", "'": "&#39;" }[c];
    });
  }

  function readIsland() {
    var node = document.getElementById("citation-data");
    if (!node) throw new Error("data island missing");
    var data = JSON.parse(node.textContent);
    if (!data || !Array.isArray(data.clusters) || !Array.isArray(data.heat)) {
      throw new Error("unexpected data island shape");
    }
    data.clusters.forEach(function (c, i) {
      if (typeof c.lat !== "number" || typeof c.lng !== "number" ||
          typeof c.radius_px !== "number" || !Array.isArray(c.researchers)) {
        throw new Error("cluster " + i + " is malformed");
      }
    });
    return data;
  }

  function popupHtml(cluster) {
    var place = escapeHtml(cluster.city) + (cluster.country ? ", " + escapeHtml(cluster.country) : "");
    var lines = cluster.researchers.slice(0, ROSTER_LIMIT).map(function (r) {
      var line = escapeHtml(r.name);
      if (r.institution) line += " \u2014 " + escapeHtml(r.institution);
      return "<li>" + line + "</li>";
    });
    if (cluster.researchers.length > ROSTER_LIMIT) {
      lines.push('<li class="cs-more">+' + (cluster.researchers.length - ROSTER_LIMIT) + " more</li>");
    }
    return "<strong>" + place + "</strong> (" + cluster.researchers.length + ")" +
      '<ul class="cs-roster">' + lines.join("") + "</ul>";
  }

  function hydrate(data) {
    var map = L.map("map", { worldCopyJump: true });
    map.attributionControl.setPrefix("Leaflet");
    L.tileLayer(TILE_URL, {
      maxZoom: 18,
      attribution: "\u00a9 OpenStreetMap contributors"
    }).addTo(map);

    var markers = L.layerGroup();
    data.clusters.forEach(function (c) {
      L.circleMarker([c.lat, c.lng], {
        radius: c.radius_px,
        color: "#333333",
        weight: 1,
        fillColor: c.color,
        fillOpacity: 0.8
      }).bindPopup(popupHtml(c), { maxHeight: 320 }).addTo(markers);
    });
    markers.addTo(map);

    var heat = L.heatLayer(data.heat, { radius: 25, blur: 15, maxZoom: 10 });
    heat.addTo(map);

    L.control.layers(null, { "Citing researchers (heat)": heat, "Cities": markers },
      { collapsed: false }).addTo(map);

    if (data.clusters.length > 0) {
      var bounds = L.latLngBounds(data.clusters.map(function (c) { return [c.lat, c.lng]; }));
      map.fitBounds(bounds, { padding: [40, 40], maxZoom: 6 });
    } else {
      map.setView([20, 0], 2);
    }
  }

  try {
    hydrate(readIsland());
  } catch (err) {
    banner(err && err.message ? err.message : String(err));
  }
})();
