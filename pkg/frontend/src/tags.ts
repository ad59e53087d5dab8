/**
 * Parser for the server-side template tag grammar.
 *
 * Templates are HTML with `{{tag attr="value"}}` markers; form, select and
 * option carry bodies closed by `{{/tag}}`, everything else is a leaf. This
 * parser exists so the asset pipeline can verify page structure without
 * running the server.
 */

export type TemplateNode = TextNode | TagNode;

export interface TextNode {
  type: "text";
  text: string;
}

export interface TagNode {
  type: "tag";
  kind: string;
  attrs: Record<string, string>;
  children: TemplateNode[];
}

export class TemplateSyntaxError extends Error {
  constructor(
    readonly templateName: string,
    readonly line: number,
    message: string,
  ) {
    super(`${templateName}:${line}: ${message}`);
  }
}

const LEAF_TAGS = new Set(["text", "password", "submit", "errors", "session"]);
const CONTAINER_TAGS = new Set(["form", "select", "option"]);

const TAG_RE = /\{\{\s*(\/?)([A-Za-z][A-Za-z0-9_]*)((?:\s+[A-Za-z][A-Za-z0-9_]*="[^"]*")*)\s*\}\}/y;
const ATTR_RE = /([A-Za-z][A-Za-z0-9_]*)="([^"]*)"/g;

function lineOf(text: string, index: number): number {
  let line = 1;
  for (let i = 0; i < index; i++) {
    if (text[i] === "\n") line++;
  }
  return line;
}

export function parseTemplate(name: string, text: string): TemplateNode[] {
  const root: TemplateNode[] = [];
  const stack: TagNode[] = [];
  const sink = () => (stack.length ? stack[stack.length - 1].children : root);

  let pos = 0;
  for (;;) {
    const start = text.indexOf("{{", pos);
    if (start === -1) {
      if (pos < text.length) sink().push({ type: "text", text: text.slice(pos) });
      break;
    }
    if (start > pos) sink().push({ type: "text", text: text.slice(pos, start) });
    const line = lineOf(text, start);

    TAG_RE.lastIndex = start;
    const match = TAG_RE.exec(text);
    if (!match) {
      if (text.indexOf("}}", start) === -1) {
        throw new TemplateSyntaxError(name, line, "unterminated tag marker");
      }
      throw new TemplateSyntaxError(name, line, "malformed tag");
    }
    const [, closeMark, kind, rawAttrs] = match;
    if (!LEAF_TAGS.has(kind) && !CONTAINER_TAGS.has(kind)) {
      throw new TemplateSyntaxError(name, line, `unknown tag '${kind}'`);
    }

    if (closeMark) {
      if (rawAttrs.trim()) {
        throw new TemplateSyntaxError(name, line, `close tag {{/${kind}}} takes no attributes`);
      }
      const open = stack.pop();
      if (!open) {
        throw new TemplateSyntaxError(name, line, `{{/${kind}}} has no open tag`);
      }
      if (open.kind !== kind) {
        throw new TemplateSyntaxError(name, line, `expected {{/${open.kind}}}, got {{/${kind}}}`);
      }
      if (open.kind === "option" && open.children.some((c) => c.type === "tag")) {
        throw new TemplateSyntaxError(name, line, "option labels must be literal text");
      }
      sink().push(open);
    } else {
      const attrs: Record<string, string> = {};
      for (const [, key, value] of rawAttrs.matchAll(ATTR_RE)) {
        if (key in attrs) {
          throw new TemplateSyntaxError(name, line, `duplicate attribute '${key}' on {{${kind}}}`);
        }
        attrs[key] = value;
      }
      const top = stack[stack.length - 1];
      if (kind === "form" && stack.some((f) => f.kind === "form")) {
        throw new TemplateSyntaxError(name, line, "form tags may not nest");
      }
      if (kind === "option" && (!top || top.kind !== "select")) {
        throw new TemplateSyntaxError(name, line, "option is only valid inside select");
      }
      if (top && top.kind === "select" && kind !== "option") {
        throw new TemplateSyntaxError(name, line, `select may not contain {{${kind}}}`);
      }
      if (top && top.kind === "option") {
        throw new TemplateSyntaxError(name, line, "option labels must be literal text");
      }
      const node: TagNode = { type: "tag", kind, attrs, children: [] };
      if (CONTAINER_TAGS.has(kind)) {
        stack.push(node);
      } else {
        sink().push(node);
      }
    }
    pos = TAG_RE.lastIndex;
  }

  if (stack.length) {
    const open = stack[stack.length - 1];
    throw new TemplateSyntaxError(name, 0, `{{${open.kind}}} was never closed`);
  }
  return root;
}

/** Depth-first list of every tag node in the tree. */
export function collectTags(nodes: TemplateNode[]): TagNode[] {
  const out: TagNode[] = [];
  const walk = (list: TemplateNode[]) => {
    for (const node of list) {
      if (node.type === "tag") {
        out.push(node);
        walk(node.children);
      }
    }
  };
  walk(nodes);
  return out;
}

/** Concatenated literal text of a node's children. */
export function literalText(node: TagNode): string {
  return node.children
    .filter((c): c is TextNode => c.type === "text")
    .map((c) => c.text)
    .join("");
}
