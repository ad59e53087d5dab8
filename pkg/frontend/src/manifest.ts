/** The template set every portal deployment must ship. */

export interface AssetManifest {
  /** Template file names that must exist and parse. */
  requiredTemplates: string[];
  /** Stylesheet path, relative to the template directory. */
  stylesheet: string;
}

export const DEFAULT_MANIFEST: AssetManifest = {
  requiredTemplates: [
    "welcome.tpl",
    "login.tpl",
    "citizen_home.tpl",
    "employee_home.tpl",
    "hospital_home.tpl",
    "school_home.tpl",
    "admin_home.tpl",
    "failure.tpl",
    "register.tpl",
  ],
  stylesheet: "static/style.css",
};

/** The login page's select must offer exactly these choices, in this order. */
export const LOGIN_CHOICES: ReadonlyArray<{ value: string; label: string }> = [
  { value: "employee", label: "Employee" },
  { value: "citizen", label: "Citizen" },
  { value: "hospital", label: "Hospital" },
  { value: "school", label: "School" },
];
