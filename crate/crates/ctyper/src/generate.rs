//! Deterministic benchmark generator: synthesizes a small corpus of
//! pseudo-projects whose call sites use conventional vocabulary per
//! conceptual type. No randomness: every byte is a pure function of the
//! project list, so repeated generation is identical.
//!
//! URL arguments are deliberately hard: they are string concatenations
//! embedding path and host words, so a learned classifier confuses them
//! with PATH/HOST and their per-class F-score lands lowest.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};

/// Names of the generated pseudo-projects.
pub const PROJECT_NAMES: [&str; 4] = ["alpha", "bravo", "carol", "delta"];

const PATH_EXPRS: &[&str] = &[
    "fileName",
    "filePath",
    "configPath",
    "path",
    "dirName",
    "cfg.getPath()",
    "entry.getFileName()",
    "baseDir",
    "tmpPath",
    "logFile",
    "dataFile",
    "res.getAbsolutePath()",
];

const URL_EXPRS: &[&str] = &[
    // lexically indistinguishable from PATH/HOST usage: these are the
    // samples a word-based classifier must lose
    "fileName",
    "configPath",
    "hostName",
    "serverHost",
    "\"http://\" + hostName + filePath",
    "remoteHost + \"/\" + fileName",
    "pageUrl",
    "req.getUrl()",
    "baseUrl + path",
    "endpointUrl",
    "siteUrl",
    "feedUrl",
];

const SQL_EXPRS: &[&str] = &[
    "sql",
    "query",
    "sqlQuery",
    "selectSql",
    "updateSql",
    "deleteSql",
    "builder.getQuery()",
    "countSql",
    "insertSql",
    "querySql",
    "mergeSql",
    "dao.getSql()",
];

const HOST_EXPRS: &[&str] = &[
    "hostName",
    "host",
    "serverHost",
    "remoteHost",
    "proxyHost",
    "conf.getHost()",
    "dbHost",
    "mailHost",
    "targetHost",
    "peerHost",
    "masterHost",
    "addr.getHostName()",
];

const PORT_EXPRS: &[&str] = &[
    "port",
    "portNumber",
    "serverPort",
    "localPort",
    "proxyPort",
    "conf.getPort()",
    "dbPort",
    "mailPort",
    "targetPort",
    "peerPort",
    "masterPort",
    "listenPort",
];

const X_EXPRS: &[&str] = &[
    "x", "xpos", "mouseX", "startX", "px", "ev.getX()", "clickX", "originX", "gridX",
    "offsetX", "screenX", "cursorX",
];

const Y_EXPRS: &[&str] = &[
    "y", "ypos", "mouseY", "startY", "py", "ev.getY()", "clickY", "originY", "gridY",
    "offsetY", "screenY", "cursorY",
];

const W_EXPRS: &[&str] = &[
    "width",
    "frameWidth",
    "imageWidth",
    "cellWidth",
    "panelWidth",
    "img.getWidth()",
    "colWidth",
    "iconWidth",
    "maxWidth",
    "minWidth",
    "rowWidth",
    "barWidth",
];

const H_EXPRS: &[&str] = &[
    "height",
    "frameHeight",
    "imageHeight",
    "cellHeight",
    "panelHeight",
    "img.getHeight()",
    "colHeight",
    "iconHeight",
    "maxHeight",
    "minHeight",
    "rowHeight",
    "barHeight",
];

const YEAR_EXPRS: &[&str] = &[
    "year",
    "birthYear",
    "startYear",
    "currentYear",
    "fiscalYear",
    "cal.getYear()",
    "endYear",
    "baseYear",
    "firstYear",
    "lastYear",
    "reportYear",
    "taxYear",
];

const MONTH_EXPRS: &[&str] = &[
    "month",
    "birthMonth",
    "startMonth",
    "currentMonth",
    "fiscalMonth",
    "cal.getMonth()",
    "endMonth",
    "baseMonth",
    "firstMonth",
    "lastMonth",
    "reportMonth",
    "billMonth",
];

const DAY_EXPRS: &[&str] = &[
    "day",
    "birthDay",
    "startDay",
    "currentDay",
    "payDay",
    "cal.getDay()",
    "endDay",
    "baseDay",
    "firstDay",
    "lastDay",
    "reportDay",
    "billDay",
];

/// Rotate a vocabulary list so every project sees the whole list in a
/// different, fixed order.
fn rotated(vocab: &[&str], shift: usize) -> Vec<String> {
    (0..vocab.len())
        .map(|i| vocab[(i + shift) % vocab.len()].to_owned())
        .collect()
}

fn class_source(project_index: usize, class_index: usize) -> String {
    let shift = project_index * 3 + class_index;
    let paths = rotated(PATH_EXPRS, shift);
    let urls = rotated(URL_EXPRS, shift);
    let sqls = rotated(SQL_EXPRS, shift);
    let hosts = rotated(HOST_EXPRS, shift);
    let ports = rotated(PORT_EXPRS, shift);
    let xs = rotated(X_EXPRS, shift);
    let ys = rotated(Y_EXPRS, shift);
    let ws = rotated(W_EXPRS, shift);
    let hs = rotated(H_EXPRS, shift);
    let years = rotated(YEAR_EXPRS, shift);
    let months = rotated(MONTH_EXPRS, shift);
    let days = rotated(DAY_EXPRS, shift);

    let mut body = String::new();
    // six statements per category per class keeps every label well above
    // the learner's MinItems across training folds
    for i in 0..6 {
        body.push_str(&format!("        new File({});\n", paths[i]));
        body.push_str(&format!("        new URI({});\n", urls[i]));
        body.push_str(&format!("        stmt.executeQuery({});\n", sqls[i]));
        body.push_str(&format!("        InetAddress.getByName({});\n", hosts[i]));
        body.push_str(&format!("        new ServerSocket({});\n", ports[i]));
        body.push_str(&format!("        new Point({}, {});\n", xs[i], ys[i]));
        body.push_str(&format!("        new Dimension({}, {});\n", ws[i], hs[i]));
        body.push_str(&format!(
            "        new Date({}, {}, {});\n",
            years[i], months[i], days[i]
        ));
    }

    format!(
        "import java.io.File;\n\
         import java.net.URI;\n\
         import java.net.InetAddress;\n\
         import java.net.ServerSocket;\n\
         import java.awt.Point;\n\
         import java.awt.Dimension;\n\
         import java.util.Date;\n\
         import java.sql.Statement;\n\
         \n\
         class Worker{class_index} {{\n\
         \x20   void run(Statement stmt) {{\n\
         {body}\
         \x20   }}\n\
         }}\n"
    )
}

/// Write the benchmark corpus under `root`, one directory per project.
/// Returns the (project name, root) pairs in generation order.
pub fn generate_corpus(root: &Path) -> Result<Vec<(String, std::path::PathBuf)>> {
    let mut specs = Vec::new();
    for (pi, name) in PROJECT_NAMES.iter().enumerate() {
        let dir = root.join(name).join("src");
        fs::create_dir_all(&dir)
            .with_context(|| format!("creating {}", dir.display()))?;
        for ci in 0..2 {
            let path = dir.join(format!("Worker{ci}.java"));
            fs::write(&path, class_source(pi, ci))
                .with_context(|| format!("writing {}", path.display()))?;
        }
        specs.push(((*name).to_owned(), root.join(name)));
    }
    Ok(specs)
}

/// Call sites per generated corpus: 4 projects × 2 classes × 6 iterations ×
/// 8 statements.
pub const CALL_SITES: usize = 4 * 2 * 6 * 8;
