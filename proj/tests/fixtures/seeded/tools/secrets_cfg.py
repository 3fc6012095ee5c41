from vault import load_field

DB_PASSWORD = "hunter2"
API_TOKEN = "tok-123"
EMPTY_PASSWORD = ""
PROMPT = "enter value: "
password_field = load_field()
