/**
 * Asset validation: every required page exists and parses, the stylesheet is
 * in place, the login page carries exactly the expected control set, and
 * every view path the routing config names has a backing template.
 */

import * as fs from "node:fs";
import * as path from "node:path";

import { AssetManifest, DEFAULT_MANIFEST, LOGIN_CHOICES } from "./manifest.js";
import {
  TagNode,
  TemplateNode,
  TemplateSyntaxError,
  collectTags,
  literalText,
  parseTemplate,
} from "./tags.js";

export interface Finding {
  code: string;
  file: string;
  message: string;
}

function finding(code: string, file: string, message: string): Finding {
  return { code, file, message };
}

function parseDir(templateDir: string, findings: Finding[]): Map<string, TemplateNode[]> {
  const parsed = new Map<string, TemplateNode[]>();
  if (!fs.existsSync(templateDir)) {
    findings.push(finding("MissingDirectory", templateDir, "template directory not found"));
    return parsed;
  }
  for (const entry of fs.readdirSync(templateDir).sort()) {
    if (!entry.endsWith(".tpl")) continue;
    const text = fs.readFileSync(path.join(templateDir, entry), "utf-8");
    try {
      parsed.set(entry, parseTemplate(entry, text));
    } catch (error) {
      if (error instanceof TemplateSyntaxError) {
        findings.push(finding("TemplateSyntax", entry, error.message));
      } else {
        throw error;
      }
    }
  }
  return parsed;
}

function checkLoginControls(nodes: TemplateNode[], findings: Finding[]): void {
  const file = "login.tpl";
  const tags = collectTags(nodes);
  const byKind = (kind: string) => tags.filter((t) => t.kind === kind);

  if (byKind("errors").length !== 1) {
    findings.push(finding("MissingErrorsTag", file, "login page needs exactly one errors tag"));
  }

  const forms = byKind("form");
  if (forms.length !== 1) {
    findings.push(finding("MissingForm", file, "login page needs exactly one form tag"));
    return;
  }
  const form = forms[0];
  if (form.attrs["action"] !== "/Login") {
    findings.push(
      finding("WrongFormAction", file, `login form must post to /Login, not '${form.attrs["action"]}'`),
    );
  }

  const selects = byKind("select");
  if (selects.length !== 1 || selects[0].attrs["property"] !== "choice") {
    findings.push(
      finding("MissingUserTypeSelect", file, "login page needs exactly one select bound to 'choice'"),
    );
  } else {
    const options = selects[0].children.filter(
      (c): c is TagNode => c.type === "tag" && c.kind === "option",
    );
    const got = options.map((o) => ({ value: o.attrs["value"], label: literalText(o).trim() }));
    const want = LOGIN_CHOICES.map((c) => ({ ...c }));
    if (JSON.stringify(got) !== JSON.stringify(want)) {
      findings.push(
        finding(
          "WrongUserTypeOptions",
          file,
          `select options must be ${want.map((w) => w.label).join("/")} in order, got ` +
            (got.map((g) => g.label).join("/") || "none"),
        ),
      );
    }
  }

  const texts = byKind("text");
  if (texts.length !== 1 || texts[0].attrs["property"] !== "userName") {
    findings.push(
      finding("MissingUserNameField", file, "login page needs exactly one text input bound to 'userName'"),
    );
  }
  const passwords = byKind("password");
  if (passwords.length !== 1 || passwords[0].attrs["property"] !== "password") {
    findings.push(
      finding("MissingPasswordField", file, "login page needs exactly one password input bound to 'password'"),
    );
  }
  if (byKind("submit").length !== 1) {
    findings.push(finding("MissingSubmit", file, "login page needs exactly one submit control"));
  }
}

export function validateAssets(
  templateDir: string,
  manifest: AssetManifest = DEFAULT_MANIFEST,
): Finding[] {
  const findings: Finding[] = [];
  const parsed = parseDir(templateDir, findings);

  for (const required of manifest.requiredTemplates) {
    if (!fs.existsSync(path.join(templateDir, required))) {
      findings.push(finding("MissingTemplate", required, "required template not found"));
    }
  }

  const stylesheet = path.join(templateDir, manifest.stylesheet);
  if (!fs.existsSync(stylesheet)) {
    findings.push(finding("MissingStylesheet", manifest.stylesheet, "stylesheet not found"));
  }

  const login = parsed.get("login.tpl");
  if (login) {
    checkLoginControls(login, findings);
  }

  for (const [name, nodes] of parsed) {
    if (!name.endsWith("_home.tpl")) continue;
    const greets = collectTags(nodes).some(
      (t) => t.kind === "session" && t.attrs["attr"] === "sessUserName",
    );
    if (!greets) {
      findings.push(
        finding("MissingGreeting", name, "home page must greet the signed-in user (session tag)"),
      );
    }
  }

  return findings;
}

/** Template names referenced by view paths in a routing config document. */
export function referencedTemplates(configXml: string): string[] {
  const names = new Set<string>();
  for (const [, value] of configXml.matchAll(/(?:path|input|forward)="([^"]*)"/g)) {
    if (value.endsWith(".jsp")) {
      names.add(value.replace(/^\//, "").replace(/\.jsp$/, ".tpl"));
    }
  }
  return [...names].sort();
}

/** Every view the routing config can reach must have a backing template. */
export function validateForwardTargets(templateDir: string, configFile: string): Finding[] {
  const findings: Finding[] = [];
  if (!fs.existsSync(configFile)) {
    findings.push(finding("MissingConfig", configFile, "routing config not found"));
    return findings;
  }
  const xml = fs.readFileSync(configFile, "utf-8");
  for (const name of referencedTemplates(xml)) {
    if (!fs.existsSync(path.join(templateDir, name))) {
      findings.push(
        finding("MissingTemplate", name, "template referenced by the routing config not found"),
      );
    }
  }
  return findings;
}
